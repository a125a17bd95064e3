#pragma once

#include <algorithm>
#include <complex>
#include <cstdio>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "starfield/errors.hpp"

namespace starfield {
using Complex = std::complex<double>;
}

namespace starfield::symbols {

enum class SymbolKind { Wick, AntiWick, Classical, Untyped };

std::string_view to_string(SymbolKind kind);
SymbolKind parse_symbol_kind(std::string_view text);

// Coordinate tags. Complex: first = alpha_j, second = alpha*_j.
// Real: first = q_j, second = p_j.
struct ComplexCoordinates {
  static constexpr std::string_view first_name = "a";
  static constexpr std::string_view second_name = "ad";
};
struct RealCoordinates {
  static constexpr std::string_view first_name = "q";
  static constexpr std::string_view second_name = "p";
};

struct Exponents {
  std::vector<unsigned> first;
  std::vector<unsigned> second;

  Exponents() = default;
  explicit Exponents(std::size_t modes) : first(modes, 0u), second(modes, 0u) {}
  Exponents(std::vector<unsigned> f, std::vector<unsigned> s)
      : first(std::move(f)), second(std::move(s)) {
    if (first.size() != second.size()) {
      throw DimensionMismatch("exponent vectors differ in length");
    }
  }

  std::size_t modes() const noexcept { return first.size(); }
  unsigned total() const noexcept {
    return std::accumulate(first.begin(), first.end(), 0u) +
           std::accumulate(second.begin(), second.end(), 0u);
  }
  bool is_zero() const noexcept { return total() == 0; }

  bool operator==(const Exponents&) const = default;
};

// Total degree first, then lexicographic on (first, second).
struct GradedOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const unsigned ta = a.total();
    const unsigned tb = b.total();
    if (ta != tb) return ta < tb;
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  }
};

inline Exponents operator+(const Exponents& a, const Exponents& b) {
  if (a.modes() != b.modes()) throw DimensionMismatch("mode count mismatch");
  Exponents out(a.modes());
  for (std::size_t j = 0; j < a.modes(); ++j) {
    out.first[j] = a.first[j] + b.first[j];
    out.second[j] = a.second[j] + b.second[j];
  }
  return out;
}

// Multi-index of derivative orders, typed by coordinate system.
template <class Coordinates>
struct DerivativeIndex : Exponents {
  using Exponents::Exponents;
  DerivativeIndex() = default;
  explicit DerivativeIndex(const Exponents& e) : Exponents(e) {}

  // Single-mode convenience: first_order on mode `mode`, second_order likewise.
  static DerivativeIndex single(std::size_t modes, std::size_t mode,
                                unsigned first_order, unsigned second_order) {
    DerivativeIndex d(modes);
    d.first.at(mode) = first_order;
    d.second.at(mode) = second_order;
    return d;
  }
  unsigned order() const noexcept { return total(); }
};

using DerivativeMultiIndex = DerivativeIndex<ComplexCoordinates>;
using RealDerivativeIndex = DerivativeIndex<RealCoordinates>;

template <class Coordinates>
class Polynomial {
public:
  using Terms = std::map<Exponents, Complex, GradedOrder>;
  using coordinates = Coordinates;

  Polynomial() : Polynomial(1) {}
  explicit Polynomial(std::size_t num_modes, SymbolKind kind = SymbolKind::Untyped)
      : modes_(num_modes), kind_(kind) {
    if (num_modes == 0) throw DimensionMismatch("a symbol needs at least one mode");
  }

  static Polynomial constant(Complex value, std::size_t num_modes = 1,
                             SymbolKind kind = SymbolKind::Untyped) {
    Polynomial p(num_modes, kind);
    p.add_term(Exponents(num_modes), value);
    return p;
  }

  static Polynomial monomial(const Exponents& e, Complex coeff = 1.0,
                             SymbolKind kind = SymbolKind::Untyped) {
    Polynomial p(e.modes(), kind);
    p.add_term(e, coeff);
    return p;
  }

  // Single mode: coeff * first^m * second^n.
  static Polynomial monomial(unsigned m, unsigned n, Complex coeff = 1.0,
                             SymbolKind kind = SymbolKind::Untyped) {
    return monomial(Exponents({m}, {n}), coeff, kind);
  }

  std::size_t num_modes() const noexcept { return modes_; }
  SymbolKind kind() const noexcept { return kind_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  Polynomial with_kind(SymbolKind kind) const {
    Polynomial p = *this;
    p.kind_ = kind;
    return p;
  }

  Complex coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void add_term(const Exponents& e, Complex c) {
    if (e.modes() != modes_) throw DimensionMismatch("exponent mode count mismatch");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.total());
    return d;
  }
  unsigned first_degree(std::size_t mode) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first.at(mode));
    return d;
  }
  unsigned second_degree(std::size_t mode) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.second.at(mode));
    return d;
  }

  bool is_zero(double tol = 0.0) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const auto& t) { return std::abs(t.second) <= tol; });
  }

  Polynomial pruned(double tol) const {
    Polynomial p(modes_, kind_);
    for (const auto& [e, c] : terms_) {
      if (std::abs(c) > tol) p.terms_.emplace(e, c);
    }
    return p;
  }

  // Evaluates with independent values for the first and second variable sets.
  Complex evaluate(std::span<const Complex> first, std::span<const Complex> second) const {
    if (first.size() != modes_ || second.size() != modes_) {
      throw DimensionMismatch("evaluation point has wrong dimension");
    }
    std::vector<std::vector<Complex>> pf(modes_), ps(modes_);
    for (std::size_t j = 0; j < modes_; ++j) {
      pf[j] = powers(first[j], first_degree(j));
      ps[j] = powers(second[j], second_degree(j));
    }
    Complex sum{};
    for (const auto& [e, c] : terms_) {
      Complex v = c;
      for (std::size_t j = 0; j < modes_; ++j) v *= pf[j][e.first[j]] * ps[j][e.second[j]];
      sum += v;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_modes(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    kind_ = merge_kind(kind_, o.kind_);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_modes(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    kind_ = merge_kind(kind_, o.kind_);
    return *this;
  }
  Polynomial& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    std::erase_if(terms_, [](const auto& t) { return t.second == Complex{}; });
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Complex{-1.0}; }
  friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
  friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }

  // Pointwise product of functions (not a star product).
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_modes(b);
    Polynomial out(a.modes_, merge_kind(a.kind_, b.kind_));
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Complex& slot = out.terms_[ea + eb];
        slot += ca * cb;
      }
    }
    std::erase_if(out.terms_, [](const auto& t) { return t.second == Complex{}; });
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.modes_ == b.modes_ && a.kind_ == b.kind_ && a.terms_ == b.terms_;
  }

  // Equal kinds are kept; anything else degrades to Untyped.
  static SymbolKind merge_kind(SymbolKind a, SymbolKind b) {
    return a == b ? a : SymbolKind::Untyped;
  }

private:
  void check_modes(const Polynomial& o) const {
    if (o.modes_ != modes_) throw DimensionMismatch("symbols have different mode counts");
  }

  static std::vector<Complex> powers(Complex x, unsigned max_power) {
    std::vector<Complex> p(max_power + 1, Complex{1.0});
    for (unsigned k = 1; k <= max_power; ++k) p[k] = p[k - 1] * x;
    return p;
  }

  std::size_t modes_;
  SymbolKind kind_;
  Terms terms_;
};

using PolynomialSymbol = Polynomial<ComplexCoordinates>;
using RealSymbol = Polynomial<RealCoordinates>;

// Largest absolute coefficient difference, ignoring kind tags.
template <class C>
double max_coefficient_distance(const Polynomial<C>& a, const Polynomial<C>& b) {
  if (a.num_modes() != b.num_modes()) throw DimensionMismatch("mode count mismatch");
  double d = 0.0;
  for (const auto& [e, c] : a.terms()) d = std::max(d, std::abs(c - b.coefficient(e)));
  for (const auto& [e, c] : b.terms()) d = std::max(d, std::abs(c - a.coefficient(e)));
  return d;
}

template <class C>
bool approx_equal(const Polynomial<C>& a, const Polynomial<C>& b, double tol) {
  return max_coefficient_distance(a, b) <= tol;
}

// Same terms regardless of kind tag.
template <class C>
bool same_terms(const Polynomial<C>& a, const Polynomial<C>& b) {
  return a.num_modes() == b.num_modes() && a.terms() == b.terms();
}

template <class C>
std::string to_display_string(const Polynomial<C>& p) {
  if (p.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    char buf[64];
    if (c.imag() == 0.0) {
      std::snprintf(buf, sizeof buf, "%.6g", c.real());
    } else {
      std::snprintf(buf, sizeof buf, "(%.6g%+.6gi)", c.real(), c.imag());
    }
    out += buf;
    for (std::size_t j = 0; j < e.modes(); ++j) {
      const std::string idx = e.modes() > 1 ? std::to_string(j) : "";
      if (e.first[j]) out += " " + std::string(C::first_name) + idx + "^" + std::to_string(e.first[j]);
      if (e.second[j]) out += " " + std::string(C::second_name) + idx + "^" + std::to_string(e.second[j]);
    }
  }
  return out;
}

}  // namespace starfield::symbols
