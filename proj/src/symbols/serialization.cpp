#include "starfield/symbols/serialization.hpp"

#include <string>

namespace starfield::symbols {
namespace {

template <class C>
nlohmann::json encode(const Polynomial<C>& f, bool real_variables) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) {
    nlohmann::json t;
    t[std::string(C::first_name)] = e.first;
    t[std::string(C::second_name)] = e.second;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  nlohmann::json j;
  j["modes"] = f.num_modes();
  if (real_variables) j["variables"] = "real";
  j["terms"] = std::move(terms);
  j["kind"] = std::string(to_string(f.kind()));
  return j;
}

template <class C>
Polynomial<C> decode(const nlohmann::json& j) {
  try {
    const std::size_t modes = j.at("modes").get<std::size_t>();
    const SymbolKind kind =
        j.contains("kind") ? parse_symbol_kind(j.at("kind").get<std::string>()) : SymbolKind::Untyped;
    Polynomial<C> f(modes, kind);
    for (const auto& t : j.at("terms")) {
      Exponents e(t.at(std::string(C::first_name)).template get<std::vector<unsigned>>(),
                  t.at(std::string(C::second_name)).template get<std::vector<unsigned>>());
      if (e.modes() != modes) throw DimensionMismatch("term exponent length differs from \"modes\"");
      f.add_term(e, Complex{t.value("re", 0.0), t.value("im", 0.0)});
    }
    return f;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed symbol JSON: ") + ex.what());
  }
}

}  // namespace

nlohmann::json to_json(const PolynomialSymbol& f) { return encode(f, false); }
nlohmann::json to_json(const RealSymbol& f) { return encode(f, true); }

PolynomialSymbol polynomial_from_json(const nlohmann::json& j) {
  return decode<ComplexCoordinates>(j);
}

RealSymbol real_symbol_from_json(const nlohmann::json& j) { return decode<RealCoordinates>(j); }

}  // namespace starfield::symbols
