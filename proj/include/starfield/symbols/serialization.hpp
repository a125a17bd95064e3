#pragma once

#include <json.hpp>

#include "starfield/symbols/polynomial.hpp"

namespace starfield::symbols {

nlohmann::json to_json(const PolynomialSymbol& f);
nlohmann::json to_json(const RealSymbol& f);

PolynomialSymbol polynomial_from_json(const nlohmann::json& j);
RealSymbol real_symbol_from_json(const nlohmann::json& j);

}  // namespace starfield::symbols
