#include "starfield/eom/serialization.hpp"

#include "starfield/symbols/serialization.hpp"

namespace starfield::eom {
namespace {

template <class C>
nlohmann::json encode_index(const symbols::DerivativeIndex<C>& idx) {
  return {{std::string(C::first_name), idx.first}, {std::string(C::second_name), idx.second}};
}

template <class C>
nlohmann::json encode_term(const SurfaceTerm<C>& t) {
  nlohmann::json j;
  j["order"] = t.order;
  j["outer"] = encode_index(t.outer);
  j["inner_derivative"] = t.inner_derivative ? encode_index(*t.inner_derivative) : nlohmann::json();
  j["inner"] = symbols::to_json(t.inner_coeff);
  j["scalar"] = {{"re", t.scalar.real()}, {"im", t.scalar.imag()}};
  return j;
}

}  // namespace

nlohmann::json to_json(const ComplexSurfaceTerm& t) { return encode_term(t); }
nlohmann::json to_json(const RealSurfaceTerm& t) { return encode_term(t); }

nlohmann::json to_json(const EomSeries& eom) {
  nlohmann::json j;
  j["scheme"] = std::string(to_string(eom.scheme()));
  j["variable_form"] = std::string(to_string(eom.variable_form()));
  j["modes"] = eom.num_modes();
  j["max_n"] = eom.max_n();
  j["generator"] = eom.generator() ? symbols::to_json(*eom.generator()) : nlohmann::json();
  nlohmann::json terms = nlohmann::json::array();
  if (eom.variable_form() == VariableForm::Complex) {
    for (const auto& t : eom.complex_terms()) terms.push_back(to_json(t));
  } else {
    for (const auto& t : eom.real_terms()) terms.push_back(to_json(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

nlohmann::json to_json(const FpCoefficients& fp) {
  return {{"A_q", symbols::to_json(fp.A_q)},   {"A_p", symbols::to_json(fp.A_p)},
          {"D_qq", symbols::to_json(fp.D_qq)}, {"D_pp", symbols::to_json(fp.D_pp)},
          {"D_qp", symbols::to_json(fp.D_qp)}, {"traceless", fp.traceless()}};
}

}  // namespace starfield::eom
