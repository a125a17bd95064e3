#include "starfield/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "starfield/eom/milburn.hpp"
#include "starfield/star/star_product.hpp"
#include "starfield/symbols/serialization.hpp"

namespace starfield::cli {

using nlohmann::json;
using symbols::Exponents;
using symbols::SymbolKind;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
  }
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_factor(const std::string& token, const std::map<std::string, double>& params) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec == std::errc() && ptr == end) return v;
  auto it = params.find(token);
  if (it == params.end()) throw ConfigError("unknown parameter \"" + token + "\" in coefficient");
  return it->second;
}

double parse_product(std::string text, const std::map<std::string, double>& params) {
  text = trim(text);
  double sign = 1.0;
  while (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    if (text.front() == '-') sign = -sign;
    text = trim(std::string_view(text).substr(1));
  }
  if (text.empty()) throw ConfigError("empty coefficient expression");
  double value = sign;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, '*')) {
    token = trim(token);
    if (token.empty()) throw ConfigError("malformed coefficient expression \"" + text + "\"");
    value *= parse_factor(token, params);
  }
  return value;
}

Complex parse_coeff(const json& c, const std::map<std::string, double>& params) {
  if (c.is_number()) return c.get<double>();
  if (c.is_string()) return parse_product(c.get<std::string>(), params);
  if (c.is_array() && c.size() == 2) {
    return {parse_coeff(c[0], params).real(), parse_coeff(c[1], params).real()};
  }
  if (c.is_object()) {
    check_keys(c, {"re", "im"}, "coefficient");
    return {c.contains("re") ? parse_coeff(c["re"], params).real() : 0.0,
            c.contains("im") ? parse_coeff(c["im"], params).real() : 0.0};
  }
  throw ConfigError("coefficient must be a number, [re, im], {re, im} or a parameter product");
}

std::vector<unsigned> parse_powers(const json& v, std::size_t modes, const char* name) {
  try {
    if (v.is_number_integer()) {
      if (modes != 1) throw ConfigError(std::string("\"") + name + "\" must be an array for several modes");
      if (v.get<long long>() < 0) throw json::other_error::create(0, "negative power", &v);
      return {v.get<unsigned>()};
    }
    auto p = v.get<std::vector<unsigned>>();
    if (p.size() != modes) throw ConfigError(std::string("\"") + name + "\" has the wrong number of modes");
    return p;
  } catch (const json::exception&) {
    throw ConfigError(std::string("\"") + name + "\" must be a non-negative integer or an array of them");
  }
}

// Wick symbol of a product of ladder operators, e.g. "ad a ad a" or "ad0 a1".
PolynomialSymbol word_symbol(const std::string& word, std::size_t modes) {
  PolynomialSymbol out = PolynomialSymbol::constant(1.0, modes, SymbolKind::Wick);
  std::stringstream ss(word);
  std::string tok;
  bool any = false;
  while (ss >> tok) {
    const bool dagger = tok.rfind("ad", 0) == 0;
    const std::string rest = tok.substr(dagger ? 2 : 1);
    if (!dagger && tok.front() != 'a') throw ConfigError("unknown operator \"" + tok + "\" in word");
    std::size_t mode = 0;
    if (!rest.empty()) {
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), mode);
      if (ec != std::errc() || ptr != rest.data() + rest.size()) {
        throw ConfigError("unknown operator \"" + tok + "\" in word");
      }
    }
    if (mode >= modes) throw ConfigError("operator \"" + tok + "\" refers to a missing mode");
    const PolynomialSymbol letter = dagger ? symbols::alpha_star(mode, modes, SymbolKind::Wick)
                                           : symbols::alpha(mode, modes, SymbolKind::Wick);
    out = star::wick_star(out, letter);
    any = true;
  }
  if (!any) throw ConfigError("empty operator word");
  return out;
}

PolynomialSymbol parse_monomials(const json& list, std::size_t modes, SymbolKind kind, bool allow_words,
                                 const std::map<std::string, double>& params) {
  if (!list.is_array()) throw ConfigError("\"monomials\" must be an array");
  PolynomialSymbol out(modes, kind);
  for (const auto& m : list) {
    check_keys(m, {"a", "ad", "coeff", "word"}, "monomial");
    const Complex c = m.contains("coeff") ? parse_coeff(m["coeff"], params) : Complex{1.0};
    if (m.contains("word")) {
      if (!allow_words) throw ConfigError("operator words need quantization normal_ordered_operator");
      if (m.contains("a") || m.contains("ad")) throw ConfigError("a monomial takes either powers or a word");
      out += (word_symbol(m["word"].get<std::string>(), modes) * c).with_kind(kind);
      continue;
    }
    const std::vector<unsigned> zero(modes, 0u);
    Exponents e(m.contains("a") ? parse_powers(m["a"], modes, "a") : zero,
                m.contains("ad") ? parse_powers(m["ad"], modes, "ad") : zero);
    out.add_term(e, c);
  }
  return out;
}

json preset_monomials(const std::string& name, Quantization q) {
  if (name == "harmonic") return json::array({{{"a", 1}, {"ad", 1}, {"coeff", "omega0"}}});
  if (name == "anharmonic") {
    if (q == Quantization::NormalOrderedOperator) {
      throw ConfigError("preset anharmonic is a classical Hamiltonian; use preset milburn for the operator");
    }
    return json::array({{{"a", 1}, {"ad", 1}, {"coeff", "omega0"}},
                        {{"a", 2}, {"ad", 2}, {"coeff", "omega0*mu"}}});
  }
  if (name == "milburn") {
    if (q != Quantization::NormalOrderedOperator) {
      throw ConfigError("preset milburn is an operator; it needs quantization normal_ordered_operator");
    }
    return json::array({{{"word", "ad a"}, {"coeff", "omega0"}},
                        {{"word", "ad a ad a"}, {"coeff", "omega0*mu"}}});
  }
  throw ConfigError("unknown Hamiltonian preset \"" + name + "\"");
}

SymbolKind kind_of(Quantization q) {
  return q == Quantization::ClassicalAntiWick ? SymbolKind::AntiWick : SymbolKind::Wick;
}

Complex parse_complex_pair(const json& v, const char* name) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(std::string("\"") + name + "\" must be a number or [re, im]");
}

}  // namespace

std::string_view to_string(Quantization q) {
  switch (q) {
    case Quantization::ClassicalAntiWick: return "classical_antiwick";
    case Quantization::ClassicalWick: return "classical_wick";
    case Quantization::NormalOrderedOperator: return "normal_ordered_operator";
  }
  return "?";
}

Quantization parse_quantization(std::string_view text) {
  if (text == "classical_antiwick") return Quantization::ClassicalAntiWick;
  if (text == "classical_wick") return Quantization::ClassicalWick;
  if (text == "normal_ordered_operator") return Quantization::NormalOrderedOperator;
  throw ConfigError("unknown quantization \"" + std::string(text) +
                    "\" (expected classical_antiwick, classical_wick or normal_ordered_operator)");
}

double HamiltonianSpec::omega0() const {
  auto it = parameters.find("omega0");
  return it == parameters.end() ? 1.0 : it->second;
}

HamiltonianSpec parse_hamiltonian(const json& j) {
  check_keys(j, {"quantization", "monomials", "preset", "parameters", "modes", "frame", "self_adjoint"},
             "hamiltonian");
  if (!j.contains("quantization")) {
    throw ConfigError("hamiltonian needs a quantization tag (classical_antiwick, classical_wick or "
                      "normal_ordered_operator)");
  }
  HamiltonianSpec h;
  h.quantization = parse_quantization(get_or<std::string>(j, "quantization", ""));
  h.modes = get_or<std::size_t>(j, "modes", 1);
  if (h.modes == 0) throw ConfigError("hamiltonian needs at least one mode");
  h.parameters["omega0"] = 1.0;
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ConfigError("\"parameters\" must be an object");
    for (auto it = j["parameters"].begin(); it != j["parameters"].end(); ++it) {
      if (!it.value().is_number()) throw ConfigError("parameter \"" + it.key() + "\" must be a number");
      h.parameters[it.key()] = it.value().get<double>();
    }
  }
  if (!(h.omega0() > 0.0)) throw ConfigError("omega0 must be positive");
  const std::string frame = get_or<std::string>(j, "frame", "lab");
  if (frame != "lab" && frame != "rotating") throw ConfigError("frame must be \"lab\" or \"rotating\"");
  h.rotating_frame = frame == "rotating";
  h.self_adjoint = get_or<bool>(j, "self_adjoint", true);

  const SymbolKind kind = kind_of(h.quantization);
  const bool words = h.quantization == Quantization::NormalOrderedOperator;
  h.symbol = PolynomialSymbol(h.modes, kind);
  if (!j.contains("preset") && !j.contains("monomials")) throw ConfigError("hamiltonian needs monomials or a preset");
  if (j.contains("preset")) {
    if (h.modes != 1) throw ConfigError("presets are single-mode");
    h.symbol += parse_monomials(preset_monomials(get_or<std::string>(j, "preset", ""), h.quantization), 1,
                                kind, words, h.parameters);
  }
  if (j.contains("monomials")) h.symbol += parse_monomials(j["monomials"], h.modes, kind, words, h.parameters);
  h.symbol = h.symbol.with_kind(kind);

  if (h.rotating_frame) {
    if (h.modes != 1) throw ConfigError("the rotating frame is single-mode");
    h.symbol = kind == SymbolKind::Wick ? eom::rotating_frame_wick(h.symbol, h.omega0())
                                        : eom::rotating_frame_antiwick(h.symbol, h.omega0());
  }
  if (h.self_adjoint && !symbols::is_real_symbol(h.symbol, 1e-12)) {
    throw ConfigError("hamiltonian is declared self-adjoint but its symbol is not real; add the "
                      "conjugate monomials or set \"self_adjoint\": false");
  }
  return h;
}

PolynomialSymbol parse_observable(const json& j, const std::map<std::string, double>& parameters,
                                  std::size_t modes) {
  if (j.is_object() && j.contains("terms")) return symbols::polynomial_from_json(j);
  check_keys(j, {"kind", "monomials"}, "observable");
  if (!j.contains("kind")) throw ConfigError("observable needs a kind (wick or antiwick)");
  const SymbolKind kind = symbols::parse_symbol_kind(get_or<std::string>(j, "kind", ""));
  if (kind != SymbolKind::Wick && kind != SymbolKind::AntiWick) {
    throw ConfigError("observable kind must be wick or antiwick");
  }
  return parse_monomials(j.value("monomials", json::array()), modes, kind, false, parameters).with_kind(kind);
}

PolynomialSymbol scheme_hamiltonian(const HamiltonianSpec& h, eom::Scheme scheme,
                                    const ComplementarityOverride& override) {
  const SymbolKind kind = h.symbol.kind();
  if (scheme == eom::Scheme::QFunction) {
    if (kind == SymbolKind::AntiWick) return h.symbol;
    if (!override.wick_for_q) {
      throw ComplementarityError(
          "the Q-function series needs the anti-Wick Hamiltonian, but this one is tagged " +
          std::string(to_string(h.quantization)) +
          " (a Wick symbol). This is the Milburn pitfall: pairing a Hamiltonian that is not "
          "anti-Wick quantized with the Husimi function adds a spurious drift. Use "
          "classical_antiwick, or pass --i-know-this-is-wick to take the anti-Wick symbol of this "
          "operator and reproduce that artifact on purpose.");
    }
    return symbols::berezin_inverse(h.symbol);
  }
  if (kind == SymbolKind::Wick) return h.symbol;
  if (!override.antiwick_for_p) {
    throw ComplementarityError(
        "the P-function series needs the Wick Hamiltonian, but this one is tagged classical_antiwick. "
        "Use classical_wick or normal_ordered_operator, or pass --i-know-this-is-antiwick to take the "
        "Wick symbol of the anti-Wick quantized operator.");
  }
  return symbols::berezin_forward(h.symbol);
}

void RunConfig::validate() const {
  grid.validate();
  integrator.validate();
  if (integrator.snapshot_times.empty() && snapshot_count < 2) throw ConfigError("need at least two snapshots");
  if (initial.type != "coherent" && initial.type != "gaussian_p") {
    throw ConfigError("initial type must be coherent or gaussian_p");
  }
  if ((initial.type == "coherent") != (scheme == eom::Scheme::QFunction)) {
    throw ConfigError("initial state " + initial.type + " does not match the " +
                      std::string(eom::to_string(scheme)) + " scheme (coherent for Q, gaussian_p for P)");
  }
  if (!(ehrenfest_spacing > 0.0)) throw ConfigError("ehrenfest snapshot spacing must be positive");
}

RunConfig parse_run_config(const json& j) {
  check_keys(j, {"hamiltonian", "scheme", "grid", "initial", "integrator", "outputs", "compare_oracle",
                 "ehrenfest", "observable"},
             "config");
  RunConfig c;
  if (!j.contains("hamiltonian")) throw ConfigError("config needs a hamiltonian");
  c.hamiltonian = parse_hamiltonian(j["hamiltonian"]);
  const std::string scheme = get_or<std::string>(j, "scheme", "Q");
  if (scheme != "Q" && scheme != "P") throw ConfigError("scheme must be \"Q\" or \"P\"");
  c.scheme = scheme == "Q" ? eom::Scheme::QFunction : eom::Scheme::PFunction;
  if (c.scheme == eom::Scheme::PFunction) c.initial.type = "gaussian_p";

  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, {"half_width", "n", "q_min", "q_max", "p_min", "p_max", "nq", "np"}, "grid");
    if (g.contains("q_min")) {
      c.grid = pde::GridSpec{get_or<double>(g, "q_min", -1), get_or<double>(g, "q_max", 1),
                             get_or<double>(g, "p_min", -1), get_or<double>(g, "p_max", 1),
                             get_or<std::size_t>(g, "nq", 9), get_or<std::size_t>(g, "np", 9)};
    } else {
      c.grid = pde::GridSpec::square_alpha(get_or<double>(g, "half_width", 6.5), get_or<std::size_t>(g, "n", 121));
    }
  }
  if (j.contains("initial")) {
    const json& s = j["initial"];
    check_keys(s, {"type", "alpha0", "nbar", "min_margin", "enforce_margin"}, "initial");
    c.initial.type = get_or<std::string>(s, "type", c.initial.type);
    if (s.contains("alpha0")) c.initial.alpha0 = parse_complex_pair(s["alpha0"], "alpha0");
    c.initial.nbar = get_or<double>(s, "nbar", c.initial.nbar);
    c.initial.margin.min_margin = get_or<double>(s, "min_margin", c.initial.margin.min_margin);
    c.initial.margin.enforce = get_or<bool>(s, "enforce_margin", c.initial.margin.enforce);
  }
  if (j.contains("integrator")) {
    const json& s = j["integrator"];
    check_keys(s, {"dt", "t_final", "stencil_order", "step_bound_factor", "enforce_step_bound", "blowup_factor",
                   "snapshots", "snapshot_times", "boundary"},
               "integrator");
    auto& ic = c.integrator;
    ic.dt = get_or<double>(s, "dt", ic.dt);
    ic.t_final = get_or<double>(s, "t_final", ic.t_final);
    ic.stencil_order = get_or<unsigned>(s, "stencil_order", ic.stencil_order);
    ic.step_bound_factor = get_or<double>(s, "step_bound_factor", ic.step_bound_factor);
    ic.enforce_step_bound = get_or<bool>(s, "enforce_step_bound", ic.enforce_step_bound);
    ic.blowup_factor = get_or<double>(s, "blowup_factor", ic.blowup_factor);
    ic.snapshot_times = get_or<std::vector<double>>(s, "snapshot_times", {});
    c.snapshot_count = get_or<std::size_t>(s, "snapshots", c.snapshot_count);
    if (get_or<std::string>(s, "boundary", "zero_pad") != "zero_pad") {
      throw ConfigError("the only boundary is zero_pad");
    }
  }
  c.outputs = get_or<std::string>(j, "outputs", c.outputs.string());
  if (j.contains("compare_oracle")) {
    const json& v = j["compare_oracle"];
    if (v.is_boolean()) {
      c.compare_oracle = v.get<bool>() ? OracleMode::On : OracleMode::Off;
    } else if (v == "auto") {
      c.compare_oracle = OracleMode::Auto;
    } else {
      throw ConfigError("compare_oracle must be true, false or \"auto\"");
    }
  }
  if (j.contains("ehrenfest")) {
    check_keys(j["ehrenfest"], {"snapshot_spacing"}, "ehrenfest");
    c.ehrenfest_spacing = get_or<double>(j["ehrenfest"], "snapshot_spacing", c.ehrenfest_spacing);
  }
  if (j.contains("observable")) c.observable = j["observable"];
  return c;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace starfield::cli
