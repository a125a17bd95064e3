#include "starfield/eom/fokker_planck.hpp"

#include <string>

#include "starfield/eom/derive.hpp"

namespace starfield::eom {

FpCoefficients extract_fp(const EomSeries& eom) {
  const EomSeries real =
      eom.variable_form() == VariableForm::Real ? eom : to_real_form(eom);
  if (real.num_modes() != 1) {
    throw ConfigError("extract_fp supports single-mode series only");
  }
  for (const auto& t : real.real_terms()) {
    if (t.outer.order() >= 3) {
      throw BeyondDiffusion(static_cast<int>(t.order),
                            "series contains surface derivatives of order " +
                                std::to_string(t.order) + "; not a Fokker-Planck equation");
    }
  }
  FpCoefficients fp{RealSymbol(1), RealSymbol(1), RealSymbol(1), RealSymbol(1), RealSymbol(1)};
  for (const auto& [outer, c] : group_by_outer(real.real_terms())) {
    const unsigned a = outer.first[0];
    const unsigned b = outer.second[0];
    if (a == 1 && b == 0) fp.A_q = -c;
    else if (a == 0 && b == 1) fp.A_p = -c;
    else if (a == 2 && b == 0) fp.D_qq = c * Complex{2.0};
    else if (a == 0 && b == 2) fp.D_pp = c * Complex{2.0};
    else if (a == 1 && b == 1) fp.D_qp = c;
  }
  return fp;
}

std::vector<RealSurfaceTerm> beyond_diffusion_terms(const PolynomialSymbol& h, Scheme scheme,
                                                    unsigned n) {
  if (n < 3) throw ConfigError("beyond_diffusion_terms needs n >= 3");
  const EomSeries block = derive_eom(h, scheme).block(n);
  if (block.empty()) return {};
  return to_real_form(block).real_terms();
}

}  // namespace starfield::eom
