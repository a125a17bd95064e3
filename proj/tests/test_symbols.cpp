#include <doctest.h>

#include <cmath>
#include <random>

#include "starfield/symbols/calculus.hpp"
#include "starfield/symbols/serialization.hpp"
#include "support/fock_engine.hpp"
#include "support/random_symbols.hpp"

using namespace starfield;
using namespace starfield::symbols;
using starfield::testing::random_polynomial;

namespace {

PolynomialSymbol mono(unsigned m, unsigned n, Complex c = 1.0, SymbolKind k = SymbolKind::Untyped) {
  return PolynomialSymbol::monomial(m, n, c, k);
}

// Wirtinger derivatives by central differences of the evaluated function.
Complex numeric_wirtinger(const PolynomialSymbol& f, Complex z, bool conj_variable) {
  const double h = 1e-5;
  auto at = [&](Complex w) {
    const Complex pt[1] = {w};
    return evaluate(f, pt);
  };
  const Complex dx = (at(z + h) - at(z - h)) / (2 * h);
  const Complex dy = (at(z + Complex(0, h)) - at(z - Complex(0, h))) / (2 * h);
  return conj_variable ? 0.5 * (dx + Complex(0, 1) * dy) : 0.5 * (dx - Complex(0, 1) * dy);
}

}  // namespace

TEST_CASE("polynomial keeps canonical sparse form") {
  PolynomialSymbol f = mono(1, 1, 2.0) + mono(2, 0, 1.0);
  f -= mono(1, 1, 2.0);
  CHECK(f.size() == 1);
  CHECK(f.coefficient(Exponents({2}, {0})) == Complex(1.0));
  PolynomialSymbol z = f * Complex{0.0};
  CHECK(z.empty());
  // Graded ordering: constant, then degree 1, then degree 2.
  PolynomialSymbol g = mono(2, 0) + mono(0, 0) + mono(0, 1) + mono(1, 0);
  std::vector<unsigned> degrees;
  for (const auto& [e, c] : g.terms()) degrees.push_back(e.total());
  CHECK(degrees == std::vector<unsigned>{0, 1, 1, 2});
  CHECK_THROWS_AS(PolynomialSymbol(0), DimensionMismatch);
  CHECK_THROWS_AS(f + PolynomialSymbol(2), DimensionMismatch);
}

TEST_CASE("differentiate follows the monomial rule") {
  const PolynomialSymbol f = mono(2, 2);
  CHECK(same_terms(differentiate(f, DerivativeMultiIndex({1}, {1})), mono(1, 1, 4.0)));
  CHECK(differentiate(mono(2, 0), DerivativeMultiIndex({0}, {1})).empty());
  CHECK(differentiate(f, DerivativeMultiIndex({3}, {0})).empty());
  CHECK(differentiate(f.with_kind(SymbolKind::Wick), Wirtinger::Alpha, 1).kind() == SymbolKind::Wick);
}

TEST_CASE("differentiate agrees with numerical Wirtinger derivatives") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const PolynomialSymbol f = random_polynomial(rng, 5, 1, false);
    const Complex z(u(rng), u(rng));
    const Complex pt[1] = {z};
    const Complex da = evaluate(differentiate(f, Wirtinger::Alpha, 1), pt);
    const Complex db = evaluate(differentiate(f, Wirtinger::AlphaStar, 1), pt);
    CHECK(std::abs(da - numeric_wirtinger(f, z, false)) < 1e-6);
    CHECK(std::abs(db - numeric_wirtinger(f, z, true)) < 1e-6);
  }
}

TEST_CASE("mixed derivatives commute") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const PolynomialSymbol f = random_polynomial(rng, 7, 2);
    const auto ab = differentiate(differentiate(f, Wirtinger::Alpha, 1, 1), Wirtinger::AlphaStar, 1, 0);
    const auto ba = differentiate(differentiate(f, Wirtinger::AlphaStar, 1, 0), Wirtinger::Alpha, 1, 1);
    CHECK(ab == ba);
  }
}

TEST_CASE("Berezin transforms on the anharmonic interaction") {
  const PolynomialSymbol hw = mono(2, 2, 1.0, SymbolKind::Wick) + mono(1, 1, 1.0, SymbolKind::Wick);
  const PolynomialSymbol expected =
      mono(2, 2, 1.0) + mono(1, 1, -3.0) + PolynomialSymbol::constant(1.0);
  const PolynomialSymbol haw = berezin_inverse(hw);
  CHECK(haw.kind() == SymbolKind::AntiWick);
  CHECK(same_terms(haw, expected));
  CHECK(same_terms(berezin_forward(haw), hw));
  CHECK(berezin_forward(haw).kind() == SymbolKind::Wick);

  CHECK(same_terms(berezin_inverse(mono(1, 1, 1.0, SymbolKind::Wick)),
                   mono(1, 1) - PolynomialSymbol::constant(1.0)));
  CHECK(same_terms(berezin_forward(mono(1, 1, 1.0, SymbolKind::AntiWick)),
                   mono(1, 1) + PolynomialSymbol::constant(1.0)));
  const auto c = PolynomialSymbol::constant(Complex(2.5, -1.0), 1, SymbolKind::Wick);
  CHECK(same_terms(berezin_inverse(c), c));
  CHECK(berezin_inverse(mono(1, 1)).kind() == SymbolKind::Untyped);
}

TEST_CASE("Berezin transforms reject the wrong direction") {
  CHECK_THROWS_AS(berezin_inverse(mono(1, 1, 1.0, SymbolKind::AntiWick)), ComplementarityError);
  CHECK_THROWS_AS(berezin_forward(mono(1, 1, 1.0, SymbolKind::Wick)), ComplementarityError);
}

TEST_CASE("Berezin round trip and reality preservation") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const PolynomialSymbol f = random_polynomial(rng, 8, 1 + trial % 2, true, SymbolKind::Wick);
    CHECK(same_terms(berezin_forward(berezin_inverse(f)), f));
    const PolynomialSymbol r = f + adjoint(f);
    REQUIRE(is_real_symbol(r));
    CHECK(is_real_symbol(berezin_inverse(r)));
    CHECK(is_real_symbol(berezin_forward(berezin_inverse(r).with_kind(SymbolKind::AntiWick))));
  }
}

TEST_CASE("berezin_forward matches anti-normal ordered coherent sandwiches") {
  const starfield::testing::FockEngine fock(40);
  const Complex points[] = {Complex(0.0), Complex(0.5, 0.0), Complex(1.0, 0.5)};
  for (unsigned m = 0; m <= 3; ++m) {
    for (unsigned n = 0; n <= 3; ++n) {
      const PolynomialSymbol wick = berezin_forward(mono(m, n, 1.0, SymbolKind::AntiWick));
      for (Complex z : points) {
        const Complex pt[1] = {z};
        CHECK(std::abs(evaluate(wick, pt) - fock.sandwich(fock.antinormal_ordered(m, n), z)) < 1e-10);
      }
    }
  }
}

TEST_CASE("complex_to_real_expansion small orders") {
  const double s = std::sqrt(0.5);
  auto e1 = complex_to_real_expansion(1);
  REQUIRE(e1.size() == 2);
  CHECK(e1[0].q_order == 1);
  CHECK(std::abs(e1[0].coefficient - Complex(s, 0)) < 1e-15);
  CHECK(e1[1].p_order == 1);
  CHECK(std::abs(e1[1].coefficient - Complex(0, -s)) < 1e-15);

  auto e0 = complex_to_real_expansion(0);
  REQUIRE(e0.size() == 1);
  CHECK(e0[0].coefficient == Complex(1.0));

  auto e2 = complex_to_real_expansion(2);
  REQUIRE(e2.size() == 3);
  CHECK(std::abs(e2[0].coefficient - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(e2[1].coefficient - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(e2[2].coefficient - Complex(-0.5, 0)) < 1e-15);

  auto c1 = complex_to_real_expansion(1, Wirtinger::AlphaStar);
  CHECK(std::abs(c1[1].coefficient - Complex(0, s)) < 1e-15);
}

TEST_CASE("real-variable expansion matches complex differentiation at random points") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<unsigned> ord(0, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const PolynomialSymbol f = random_polynomial(rng, 6, 1, false);
    const DerivativeMultiIndex idx({ord(rng)}, {ord(rng)});
    const RealSymbol fr = to_real_variables(f);
    RealSymbol via_real(1);
    for (const auto& c : expand_derivative(idx)) via_real += differentiate(fr, c.index) * c.coefficient;
    const double q = u(rng), p = u(rng);
    const Complex z = Complex(q, p) / std::sqrt(2.0);
    const Complex pt[1] = {z};
    const Complex direct = evaluate(differentiate(f, idx), pt);
    const double qs[1] = {q}, ps[1] = {p};
    const Complex real_route = evaluate(via_real, qs, ps);
    CHECK(std::abs(direct - real_route) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("variable changes are mutually inverse") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const PolynomialSymbol f = random_polynomial(rng, 6, 2, false);
    CHECK(approx_equal(to_complex_variables(to_real_variables(f)), f, 1e-12));
  }
  // |alpha|^2 = (q^2 + p^2)/2
  const RealSymbol r = to_real_variables(mono(1, 1));
  CHECK(std::abs(r.coefficient(Exponents({2}, {0})) - 0.5) < 1e-15);
  CHECK(std::abs(r.coefficient(Exponents({0}, {2})) - 0.5) < 1e-15);
  CHECK(r.size() == 2);
}

TEST_CASE("evaluate examples") {
  const Complex one_i[1] = {Complex(1, 1)};
  CHECK(evaluate(mono(1, 1), one_i) == Complex(2.0));
  const PolynomialSymbol h = mono(2, 2) + mono(1, 1, -3.0) + PolynomialSymbol::constant(1.0);
  const Complex one[1] = {Complex(1.0)};
  CHECK(evaluate(h, one) == Complex(-1.0));
  CHECK(evaluate(PolynomialSymbol(1), one_i) == Complex(0.0));
  const Complex two[2] = {Complex(1.0), Complex(2.0)};
  CHECK_THROWS_AS(evaluate(h, two), DimensionMismatch);
}

TEST_CASE("is_real_symbol") {
  CHECK(is_real_symbol(mono(1, 1)));
  CHECK_FALSE(is_real_symbol(mono(2, 0)));
  CHECK(is_real_symbol(mono(2, 0, Complex(1, 2)) + mono(0, 2, Complex(1, -2))));
}

TEST_CASE("symbol JSON round trip") {
  std::mt19937_64 rng(16);
  const PolynomialSymbol f = random_polynomial(rng, 5, 2, false, SymbolKind::AntiWick);
  const nlohmann::json j = to_json(f);
  CHECK(j.at("kind") == "antiwick");
  CHECK(j.at("modes") == 2);
  CHECK(polynomial_from_json(j) == f);
  const RealSymbol r = to_real_variables(f);
  CHECK(real_symbol_from_json(to_json(r)) == r);
  CHECK(to_json(f).dump() == to_json(polynomial_from_json(j)).dump());
  CHECK_THROWS_AS(polynomial_from_json(nlohmann::json::parse(R"({"terms": []})")), ConfigError);
  CHECK_THROWS_AS(parse_symbol_kind("weyl"), ConfigError);
}
