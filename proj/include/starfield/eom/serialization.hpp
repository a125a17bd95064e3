#pragma once

#include <json.hpp>

#include "starfield/eom/fokker_planck.hpp"

namespace starfield::eom {

nlohmann::json to_json(const ComplexSurfaceTerm& t);
nlohmann::json to_json(const RealSurfaceTerm& t);
nlohmann::json to_json(const EomSeries& eom);
nlohmann::json to_json(const FpCoefficients& fp);

}  // namespace starfield::eom
