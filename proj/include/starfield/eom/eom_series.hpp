#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "starfield/symbols/calculus.hpp"

namespace starfield::eom {

using symbols::ComplexCoordinates;
using symbols::PolynomialSymbol;
using symbols::RealCoordinates;
using symbols::RealSymbol;

enum class VariableForm { Complex, Real };
enum class Scheme { QFunction, PFunction };

std::string_view to_string(VariableForm form);
std::string_view to_string(Scheme scheme);

// scalar * outer( inner_coeff * distribution ).
// inner_derivative records inner_coeff = d^{inner_derivative} H when the term
// was generated from a Hamiltonian.
template <class Coordinates>
struct SurfaceTerm {
  unsigned order = 0;
  symbols::DerivativeIndex<Coordinates> outer;
  std::optional<symbols::DerivativeIndex<Coordinates>> inner_derivative;
  symbols::Polynomial<Coordinates> inner_coeff;
  Complex scalar{1.0};
};

using ComplexSurfaceTerm = SurfaceTerm<ComplexCoordinates>;
using RealSurfaceTerm = SurfaceTerm<RealCoordinates>;

class EomSeries {
public:
  EomSeries(Scheme scheme, std::size_t num_modes, std::vector<ComplexSurfaceTerm> terms,
            std::optional<PolynomialSymbol> generator = std::nullopt);
  EomSeries(Scheme scheme, std::size_t num_modes, std::vector<RealSurfaceTerm> terms,
            std::optional<PolynomialSymbol> generator = std::nullopt);

  VariableForm variable_form() const noexcept;
  Scheme scheme() const noexcept { return scheme_; }
  std::size_t num_modes() const noexcept { return modes_; }
  unsigned max_n() const noexcept { return max_n_; }
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  const std::optional<PolynomialSymbol>& generator() const noexcept { return generator_; }

  // Throw ConfigError when the series is in the other form.
  const std::vector<ComplexSurfaceTerm>& complex_terms() const;
  const std::vector<RealSurfaceTerm>& real_terms() const;

  // Terms of series order n only.
  EomSeries block(unsigned n) const;

  // Rate of change for a polynomial distribution, evaluated symbolically.
  PolynomialSymbol apply(const PolynomialSymbol& distribution) const;
  RealSymbol apply(const RealSymbol& distribution) const;

private:
  Scheme scheme_;
  std::size_t modes_;
  std::variant<std::vector<ComplexSurfaceTerm>, std::vector<RealSurfaceTerm>> terms_;
  std::optional<PolynomialSymbol> generator_;
  unsigned max_n_ = 0;
};

// Combines terms sharing an outer derivative: outer -> sum scalar * inner.
template <class Coordinates>
std::vector<std::pair<symbols::DerivativeIndex<Coordinates>, symbols::Polynomial<Coordinates>>>
group_by_outer(const std::vector<SurfaceTerm<Coordinates>>& terms);

// Leibniz expansion sum_beta c_beta(alpha) d^beta Q of a complex series.
std::vector<std::pair<symbols::DerivativeMultiIndex, PolynomialSymbol>> operator_form(
    const EomSeries& eom);

}  // namespace starfield::eom
