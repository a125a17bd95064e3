#include "starfield/eom/eom_series.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "starfield/star/star_product.hpp"

namespace starfield::eom {

using symbols::Exponents;
using symbols::GradedOrder;

std::string_view to_string(VariableForm form) {
  return form == VariableForm::Complex ? "complex" : "real";
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::QFunction ? "Q" : "P";
}

namespace {

template <class C>
bool term_less(const SurfaceTerm<C>& a, const SurfaceTerm<C>& b) {
  if (a.order != b.order) return a.order < b.order;
  const GradedOrder lt;
  if (lt(a.outer, b.outer)) return true;
  if (lt(b.outer, a.outer)) return false;
  const Exponents none(a.outer.modes());
  const Exponents& ia = a.inner_derivative ? static_cast<const Exponents&>(*a.inner_derivative) : none;
  const Exponents& ib = b.inner_derivative ? static_cast<const Exponents&>(*b.inner_derivative) : none;
  return lt(ia, ib);
}

template <class C>
unsigned prepare(std::vector<SurfaceTerm<C>>& terms, std::size_t modes) {
  unsigned max_n = 0;
  for (const auto& t : terms) {
    if (t.outer.modes() != modes || t.inner_coeff.num_modes() != modes) {
      throw DimensionMismatch("surface term mode count differs from series");
    }
    max_n = std::max(max_n, t.order);
  }
  std::stable_sort(terms.begin(), terms.end(), term_less<C>);
  return max_n;
}

template <class C>
symbols::Polynomial<C> apply_terms(const std::vector<SurfaceTerm<C>>& terms, std::size_t modes,
                                   const symbols::Polynomial<C>& distribution) {
  if (distribution.num_modes() != modes) throw DimensionMismatch("distribution mode count");
  const auto d = distribution.with_kind(symbols::SymbolKind::Untyped);
  symbols::Polynomial<C> out(modes);
  for (const auto& t : terms) {
    out += symbols::differentiate(t.inner_coeff.with_kind(symbols::SymbolKind::Untyped) * d,
                                  t.outer) *
           t.scalar;
  }
  return out;
}

}  // namespace

EomSeries::EomSeries(Scheme scheme, std::size_t num_modes, std::vector<ComplexSurfaceTerm> terms,
                     std::optional<PolynomialSymbol> generator)
    : scheme_(scheme), modes_(num_modes), generator_(std::move(generator)) {
  max_n_ = prepare(terms, modes_);
  terms_ = std::move(terms);
}

EomSeries::EomSeries(Scheme scheme, std::size_t num_modes, std::vector<RealSurfaceTerm> terms,
                     std::optional<PolynomialSymbol> generator)
    : scheme_(scheme), modes_(num_modes), generator_(std::move(generator)) {
  max_n_ = prepare(terms, modes_);
  terms_ = std::move(terms);
}

VariableForm EomSeries::variable_form() const noexcept {
  return terms_.index() == 0 ? VariableForm::Complex : VariableForm::Real;
}

std::size_t EomSeries::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, terms_);
}

const std::vector<ComplexSurfaceTerm>& EomSeries::complex_terms() const {
  if (variable_form() != VariableForm::Complex) throw ConfigError("series is in real form");
  return std::get<0>(terms_);
}

const std::vector<RealSurfaceTerm>& EomSeries::real_terms() const {
  if (variable_form() != VariableForm::Real) throw ConfigError("series is in complex form");
  return std::get<1>(terms_);
}

EomSeries EomSeries::block(unsigned n) const {
  return std::visit(
      [&](const auto& v) {
        std::remove_cvref_t<decltype(v)> kept;
        std::copy_if(v.begin(), v.end(), std::back_inserter(kept),
                     [n](const auto& t) { return t.order == n; });
        return EomSeries(scheme_, modes_, std::move(kept), generator_);
      },
      terms_);
}

PolynomialSymbol EomSeries::apply(const PolynomialSymbol& distribution) const {
  return apply_terms(complex_terms(), modes_, distribution);
}

RealSymbol EomSeries::apply(const RealSymbol& distribution) const {
  return apply_terms(real_terms(), modes_, distribution);
}

template <class C>
std::vector<std::pair<symbols::DerivativeIndex<C>, symbols::Polynomial<C>>> group_by_outer(
    const std::vector<SurfaceTerm<C>>& terms) {
  std::map<Exponents, symbols::Polynomial<C>, GradedOrder> acc;
  for (const auto& t : terms) {
    auto it = acc.try_emplace(t.outer, t.inner_coeff.num_modes()).first;
    it->second += t.inner_coeff.with_kind(symbols::SymbolKind::Untyped) * t.scalar;
  }
  std::vector<std::pair<symbols::DerivativeIndex<C>, symbols::Polynomial<C>>> out;
  for (auto& [e, p] : acc) {
    if (!p.empty()) out.emplace_back(symbols::DerivativeIndex<C>(e), std::move(p));
  }
  return out;
}

template std::vector<std::pair<symbols::DerivativeMultiIndex, PolynomialSymbol>> group_by_outer(
    const std::vector<ComplexSurfaceTerm>&);
template std::vector<std::pair<symbols::RealDerivativeIndex, RealSymbol>> group_by_outer(
    const std::vector<RealSurfaceTerm>&);

std::vector<std::pair<symbols::DerivativeMultiIndex, PolynomialSymbol>> operator_form(
    const EomSeries& eom) {
  const std::size_t modes = eom.num_modes();
  std::map<Exponents, PolynomialSymbol, GradedOrder> acc;
  for (const auto& t : eom.complex_terms()) {
    std::vector<unsigned> bound = t.outer.first;
    bound.insert(bound.end(), t.outer.second.begin(), t.outer.second.end());
    star::for_each_multi_index(bound, [&](const std::vector<unsigned>& g) {
      symbols::DerivativeMultiIndex on_q(modes), rest(modes);
      double weight = 1.0;
      for (std::size_t j = 0; j < modes; ++j) {
        on_q.first[j] = g[j];
        on_q.second[j] = g[modes + j];
        rest.first[j] = t.outer.first[j] - g[j];
        rest.second[j] = t.outer.second[j] - g[modes + j];
        weight *= static_cast<double>(symbols::binomial(t.outer.first[j], g[j]) *
                                      symbols::binomial(t.outer.second[j], g[modes + j]));
      }
      PolynomialSymbol c = symbols::differentiate(
          t.inner_coeff.with_kind(symbols::SymbolKind::Untyped), rest);
      if (c.empty()) return;
      auto it = acc.try_emplace(on_q, modes).first;
      it->second += c * (t.scalar * weight);
    });
  }
  std::vector<std::pair<symbols::DerivativeMultiIndex, PolynomialSymbol>> out;
  for (auto& [e, p] : acc) {
    if (!p.empty()) out.emplace_back(symbols::DerivativeMultiIndex(e), std::move(p));
  }
  return out;
}

}  // namespace starfield::eom
