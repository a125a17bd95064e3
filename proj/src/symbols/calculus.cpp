#include "starfield/symbols/calculus.hpp"

#include <cmath>
#include <map>

namespace starfield::symbols {
namespace {

constexpr Complex kI{0.0, 1.0};

Complex ipow(Complex base, unsigned n) {
  Complex r{1.0};
  for (unsigned k = 0; k < n; ++k) r *= base;
  return r;
}

// sum_j d_alpha_j d_alpha*_j
PolynomialSymbol pairing_laplacian(const PolynomialSymbol& f) {
  PolynomialSymbol out(f.num_modes(), f.kind());
  for (std::size_t j = 0; j < f.num_modes(); ++j) {
    out += differentiate(f, DerivativeMultiIndex::single(f.num_modes(), j, 1, 1));
  }
  return out;
}

PolynomialSymbol berezin_series(const PolynomialSymbol& f, double sign, SymbolKind result_kind) {
  PolynomialSymbol sum = f.with_kind(result_kind);
  PolynomialSymbol current = f.with_kind(result_kind);
  for (unsigned t = 1; !current.empty(); ++t) {
    current = pairing_laplacian(current) * Complex{sign / static_cast<double>(t)};
    sum += current;
  }
  return sum;
}

}  // namespace

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Wick: return "wick";
    case SymbolKind::AntiWick: return "antiwick";
    case SymbolKind::Classical: return "classical";
    case SymbolKind::Untyped: return "untyped";
  }
  return "untyped";
}

SymbolKind parse_symbol_kind(std::string_view text) {
  if (text == "wick") return SymbolKind::Wick;
  if (text == "antiwick") return SymbolKind::AntiWick;
  if (text == "classical") return SymbolKind::Classical;
  if (text == "untyped") return SymbolKind::Untyped;
  throw ConfigError("unknown symbol kind '" + std::string(text) + "'");
}

PolynomialSymbol alpha(std::size_t mode, std::size_t modes, SymbolKind kind) {
  Exponents e(modes);
  e.first.at(mode) = 1;
  return PolynomialSymbol::monomial(e, 1.0, kind);
}

PolynomialSymbol alpha_star(std::size_t mode, std::size_t modes, SymbolKind kind) {
  Exponents e(modes);
  e.second.at(mode) = 1;
  return PolynomialSymbol::monomial(e, 1.0, kind);
}

PolynomialSymbol differentiate(const PolynomialSymbol& f, Wirtinger which, unsigned order,
                               std::size_t mode) {
  const bool a = which == Wirtinger::Alpha;
  return differentiate(f, DerivativeMultiIndex::single(f.num_modes(), mode, a ? order : 0,
                                                       a ? 0 : order));
}

PolynomialSymbol berezin_inverse(const PolynomialSymbol& f) {
  if (f.kind() == SymbolKind::AntiWick) {
    throw ComplementarityError(
        "berezin_inverse expects a Wick symbol; got an anti-Wick symbol "
        "(use berezin_forward to go from anti-Wick to Wick)");
  }
  const SymbolKind out =
      f.kind() == SymbolKind::Untyped ? SymbolKind::Untyped : SymbolKind::AntiWick;
  return berezin_series(f, -1.0, out);
}

PolynomialSymbol berezin_forward(const PolynomialSymbol& f) {
  if (f.kind() == SymbolKind::Wick) {
    throw ComplementarityError(
        "berezin_forward expects an anti-Wick symbol; got a Wick symbol "
        "(use berezin_inverse to go from Wick to anti-Wick)");
  }
  const SymbolKind out =
      f.kind() == SymbolKind::Untyped ? SymbolKind::Untyped : SymbolKind::Wick;
  return berezin_series(f, +1.0, out);
}

std::vector<RealDerivativeTerm> complex_to_real_expansion(unsigned n, Wirtinger which) {
  const Complex unit = which == Wirtinger::Alpha ? -kI : kI;
  const double scale = std::pow(0.5, 0.5 * n);
  std::vector<RealDerivativeTerm> out;
  out.reserve(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    out.push_back({n - m, m, static_cast<double>(binomial(n, m)) * ipow(unit, m) * scale});
  }
  return out;
}

std::vector<RealDerivativeComponent> expand_derivative(const DerivativeMultiIndex& idx) {
  const std::size_t modes = idx.modes();
  std::map<Exponents, Complex, GradedOrder> acc;
  acc.emplace(Exponents(modes), Complex{1.0});
  auto fold = [&](std::size_t j, unsigned order, Wirtinger which) {
    if (order == 0) return;
    std::map<Exponents, Complex, GradedOrder> next;
    for (const auto& [e, c] : acc) {
      for (const auto& t : complex_to_real_expansion(order, which)) {
        Exponents r = e;
        r.first[j] += t.q_order;
        r.second[j] += t.p_order;
        next[r] += c * t.coefficient;
      }
    }
    acc = std::move(next);
  };
  for (std::size_t j = 0; j < modes; ++j) {
    fold(j, idx.first[j], Wirtinger::Alpha);
    fold(j, idx.second[j], Wirtinger::AlphaStar);
  }
  std::vector<RealDerivativeComponent> out;
  for (const auto& [e, c] : acc) {
    if (c != Complex{}) out.push_back({RealDerivativeIndex(e), c});
  }
  return out;
}

RealSymbol to_real_variables(const PolynomialSymbol& f) {
  const std::size_t modes = f.num_modes();
  const double s = 1.0 / std::sqrt(2.0);
  RealSymbol out(modes, f.kind());
  std::vector<std::vector<RealSymbol>> pa(modes), pb(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    Exponents q(modes), p(modes);
    q.first[j] = 1;
    p.second[j] = 1;
    const RealSymbol a = RealSymbol::monomial(q, s) + RealSymbol::monomial(p, kI * s);
    const RealSymbol b = RealSymbol::monomial(q, s) + RealSymbol::monomial(p, -kI * s);
    pa[j] = {RealSymbol::constant(1.0, modes)};
    pb[j] = {RealSymbol::constant(1.0, modes)};
    for (unsigned k = 1; k <= f.first_degree(j); ++k) pa[j].push_back(pa[j].back() * a);
    for (unsigned k = 1; k <= f.second_degree(j); ++k) pb[j].push_back(pb[j].back() * b);
  }
  for (const auto& [e, c] : f.terms()) {
    RealSymbol term = RealSymbol::constant(c, modes);
    for (std::size_t j = 0; j < modes; ++j) {
      term = term * pa[j][e.first[j]] * pb[j][e.second[j]];
    }
    out += term;
  }
  return out.with_kind(f.kind());
}

PolynomialSymbol to_complex_variables(const RealSymbol& f) {
  const std::size_t modes = f.num_modes();
  const double s = 1.0 / std::sqrt(2.0);
  PolynomialSymbol out(modes, f.kind());
  std::vector<std::vector<PolynomialSymbol>> pq(modes), pp(modes);
  for (std::size_t j = 0; j < modes; ++j) {
    const PolynomialSymbol a = alpha(j, modes);
    const PolynomialSymbol b = alpha_star(j, modes);
    const PolynomialSymbol q = (a + b) * Complex{s};
    const PolynomialSymbol p = (a - b) * (-kI * s);
    pq[j] = {PolynomialSymbol::constant(1.0, modes)};
    pp[j] = {PolynomialSymbol::constant(1.0, modes)};
    for (unsigned k = 1; k <= f.first_degree(j); ++k) pq[j].push_back(pq[j].back() * q);
    for (unsigned k = 1; k <= f.second_degree(j); ++k) pp[j].push_back(pp[j].back() * p);
  }
  for (const auto& [e, c] : f.terms()) {
    PolynomialSymbol term = PolynomialSymbol::constant(c, modes);
    for (std::size_t j = 0; j < modes; ++j) {
      term = term * pq[j][e.first[j]] * pp[j][e.second[j]];
    }
    out += term;
  }
  return out.with_kind(f.kind());
}

Complex evaluate(const PolynomialSymbol& f, std::span<const Complex> point) {
  std::vector<Complex> conj(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) conj[j] = std::conj(point[j]);
  return f.evaluate(point, conj);
}

Complex evaluate(const RealSymbol& f, std::span<const double> q, std::span<const double> p) {
  std::vector<Complex> qc(q.begin(), q.end()), pc(p.begin(), p.end());
  return f.evaluate(qc, pc);
}

PolynomialSymbol adjoint(const PolynomialSymbol& f) {
  PolynomialSymbol out(f.num_modes(), f.kind());
  for (const auto& [e, c] : f.terms()) out.add_term(Exponents(e.second, e.first), std::conj(c));
  return out;
}

bool is_real_symbol(const PolynomialSymbol& f, double tol) {
  return max_coefficient_distance(f, adjoint(f)) <= tol;
}

}  // namespace starfield::symbols
