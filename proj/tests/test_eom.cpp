#include <doctest.h>

#include <cmath>
#include <random>

#include "starfield/eom/derive.hpp"
#include "starfield/eom/fokker_planck.hpp"
#include "starfield/eom/milburn.hpp"
#include "starfield/eom/serialization.hpp"
#include "starfield/star/star_product.hpp"
#include "support/random_symbols.hpp"

using namespace starfield;
using namespace starfield::symbols;
using namespace starfield::eom;
using starfield::testing::random_polynomial;
using starfield::testing::random_quartic_hamiltonian;

namespace {

constexpr Complex kI{0.0, 1.0};

PolynomialSymbol mono(unsigned m, unsigned n, Complex c = 1.0, SymbolKind k = SymbolKind::Untyped) {
  return PolynomialSymbol::monomial(m, n, c, k);
}

RealSymbol dq(const RealSymbol& f, unsigned a = 1) { return differentiate(f, RealDerivativeIndex({a}, {0})); }
RealSymbol dp(const RealSymbol& f, unsigned b = 1) { return differentiate(f, RealDerivativeIndex({0}, {b})); }

RealSymbol random_real_distribution(std::mt19937_64& rng) {
  PolynomialSymbol q = random_polynomial(rng, 5, 1, false);
  q += adjoint(q);
  return to_real_variables(q);
}

// Independent closed form of the real-form scalar for series order n.
Complex closed_form_scalar(Scheme scheme, unsigned n, unsigned k, unsigned m) {
  auto ip = [](Complex b, unsigned e) {
    Complex r{1.0};
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
  };
  const Complex c = (1.0 / std::tgamma(n + 1.0)) * std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) *
                    std::tgamma(n + 1.0) / (std::tgamma(m + 1.0) * std::tgamma(n - m + 1.0)) *
                    (ip(kI, k) * ip(-kI, m) - ip(-kI, k) * ip(kI, m));
  const double half_n = std::pow(0.5, n);
  if (scheme == Scheme::QFunction) return -kI * half_n * c;
  return kI * half_n * c * (n % 2 == 0 ? 1.0 : -1.0);
}

}  // namespace

TEST_CASE("harmonic Q equation is the hand-expanded first-order pair") {
  const double w = 1.7;
  const EomSeries eom = derive_q_eom(mono(1, 1, w, SymbolKind::AntiWick));
  CHECK(eom.max_n() == 1);
  CHECK(eom.size() == 2);
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    const auto q = random_polynomial(rng, 5);
    const auto expected = (differentiate(alpha_star() * q, Wirtinger::AlphaStar, 1) -
                           differentiate(alpha() * q, Wirtinger::Alpha, 1)) *
                          (-kI * w);
    CHECK(approx_equal(eom.apply(q), expected, 1e-12));
  }
}

TEST_CASE("constant Hamiltonian gives an empty series") {
  CHECK(derive_q_eom(PolynomialSymbol::constant(2.0, 1, SymbolKind::AntiWick)).empty());
  CHECK(derive_p_eom(PolynomialSymbol::constant(2.0, 1, SymbolKind::Wick)).empty());
}

TEST_CASE("derive functions enforce complementarity") {
  CHECK_THROWS_AS(derive_q_eom(mono(1, 1, 1.0, SymbolKind::Wick)), ComplementarityError);
  CHECK_THROWS_AS(derive_p_eom(mono(1, 1, 1.0, SymbolKind::AntiWick)), ComplementarityError);
  CHECK_THROWS_AS(derive_q_eom(mono(1, 1)), ComplementarityError);
  CHECK_NOTHROW(derive_q_eom(mono(1, 1, 1.0, SymbolKind::Classical)));
  CHECK_NOTHROW(derive_p_eom(mono(1, 1, 1.0, SymbolKind::Classical)));
  try {
    derive_q_eom(mono(2, 2, 1.0, SymbolKind::Wick));
    FAIL("expected a complementarity error");
  } catch (const ComplementarityError& e) {
    CHECK(std::string(e.what()).find("Milburn") != std::string::npos);
  }
}

TEST_CASE("anharmonic drift on the alpha* side") {
  const double w = 1.3, mu = 0.2;
  const auto h = mono(1, 1, w, SymbolKind::AntiWick) + mono(2, 2, w * mu, SymbolKind::AntiWick);
  const EomSeries eom = derive_q_eom(h);
  bool found = false;
  for (const auto& [outer, c] : group_by_outer(eom.block(1).complex_terms())) {
    if (outer.second[0] == 1) {
      // -i dbar(A Q) with A = w(alpha* + 2 mu alpha* |alpha|^2)
      const auto a = mono(0, 1, w) + mono(1, 2, 2.0 * w * mu);
      CHECK(approx_equal(c, a * (-kI), 1e-14));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("Q series equals -i times the Wick bracket with the Wick-transformed Hamiltonian") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    const auto h = random_polynomial(rng, 6, 1 + t % 2, true, SymbolKind::AntiWick);
    const auto q = random_polynomial(rng, 5, h.num_modes());
    const auto lhs = derive_q_eom(h).apply(q);
    const auto rhs = star::wick_bracket(berezin_forward(h), q) * (-kI);
    CHECK(max_coefficient_distance(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("P series equals -i times the anti-Wick bracket with the anti-Wick-transformed Hamiltonian") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 50; ++t) {
    const auto h = random_polynomial(rng, 6, 1 + t % 2, true, SymbolKind::Wick);
    const auto p = random_polynomial(rng, 5, h.num_modes());
    const auto lhs = derive_p_eom(h).apply(p);
    const auto rhs = star::antiwick_bracket(berezin_inverse(h), p) * (-kI);
    CHECK(max_coefficient_distance(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("real form scalars follow the closed-form C coefficients") {
  std::mt19937_64 rng(44);
  for (Scheme s : {Scheme::QFunction, Scheme::PFunction}) {
    for (int t = 0; t < 10; ++t) {
      const auto h = random_polynomial(rng, 7, 1, false,
                                       s == Scheme::QFunction ? SymbolKind::AntiWick : SymbolKind::Wick);
      const EomSeries real = to_real_form(derive_eom(h, s));
      for (const auto& term : real.real_terms()) {
        REQUIRE(term.inner_derivative.has_value());
        const unsigned n = term.order;
        const unsigned k = term.outer.second[0];
        const unsigned m = term.inner_derivative->second[0];
        CHECK(term.outer.order() == n);
        CHECK(term.inner_derivative->order() == n);
        INFO("n=", n, " k=", k, " m=", m, " scheme=", static_cast<int>(s), " got=", term.scalar.real(), ",", term.scalar.imag());
        CHECK(std::abs(term.scalar - closed_form_scalar(s, n, k, m)) < 1e-13);
      }
    }
  }
}

TEST_CASE("first-order real block is the Liouville drift") {
  const EomSeries real = to_real_form(derive_q_eom(mono(2, 1, Complex(1, 2), SymbolKind::AntiWick) +
                                                   mono(1, 2, Complex(1, -2), SymbolKind::AntiWick)));
  const EomSeries drift = real.block(1);
  for (const auto& term : drift.real_terms()) {
    const bool pure_q = term.outer.first[0] == 1;
    const bool inner_p = term.inner_derivative->second[0] == 1;
    CHECK(pure_q == inner_p);  // d_q pairs with d_p H and vice versa
    CHECK(std::abs(term.scalar - (pure_q ? Complex(-1.0) : Complex(1.0))) < 1e-15);
  }
}

TEST_CASE("complex and real forms agree on polynomial distributions") {
  std::mt19937_64 rng(45);
  for (Scheme s : {Scheme::QFunction, Scheme::PFunction}) {
    for (int t = 0; t < 20; ++t) {
      const auto h = random_polynomial(rng, 6, 1, false,
                                       s == Scheme::QFunction ? SymbolKind::AntiWick : SymbolKind::Wick);
      const auto q = random_polynomial(rng, 4, 1, false);
      const EomSeries eom = derive_eom(h, s);
      const RealSymbol direct = to_real_variables(eom.apply(q));
      const RealSymbol via_real = to_real_form(eom).apply(to_real_variables(q));
      CHECK(max_coefficient_distance(direct, via_real) <= 1e-11);
    }
  }
  const EomSeries handmade = classical_rotating_frame_liouville(0.3);
  const auto q = random_polynomial(rng, 4);
  CHECK(max_coefficient_distance(to_real_variables(handmade.apply(q)),
                                 to_real_form(handmade).apply(to_real_variables(q))) <= 1e-12);
  CHECK_THROWS_AS(to_real_form(to_real_form(handmade)), ConfigError);
}

TEST_CASE("real Hamiltonians give real rates") {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 20; ++t) {
    auto h = random_polynomial(rng, 6, 1, false);
    h = (h + adjoint(h)).with_kind(SymbolKind::AntiWick);
    const RealSymbol rate = to_real_form(derive_q_eom(h)).apply(random_real_distribution(rng));
    double worst_imag = 0.0, scale = 0.0;
    for (const auto& [e, c] : rate.terms()) {
      worst_imag = std::max(worst_imag, std::abs(c.imag()));
      scale = std::max(scale, std::abs(c.real()));
    }
    CHECK(worst_imag <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("Fokker-Planck coefficients of the harmonic oscillator") {
  const auto fp = extract_fp(derive_q_eom(mono(1, 1, 1.0, SymbolKind::AntiWick)));
  CHECK(approx_equal(fp.A_q, RealSymbol::monomial(0, 1), 1e-15));
  CHECK(approx_equal(fp.A_p, RealSymbol::monomial(1, 0, -1.0), 1e-15));
  CHECK(fp.D_qq.is_zero(1e-15));
  CHECK(fp.D_pp.is_zero(1e-15));
  CHECK(fp.D_qp.is_zero(1e-15));
  CHECK(fp.traceless());
}

TEST_CASE("Fokker-Planck coefficients against direct derivatives of H") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 30; ++t) {
    const auto h = random_quartic_hamiltonian(rng, false, SymbolKind::AntiWick);
    const RealSymbol hr = to_real_variables(h);
    const auto hq = dq(hr), hp = dp(hr), hqp = dp(dq(hr)), hqq = dq(hr, 2), hpp = dp(hr, 2);
    const auto fq = extract_fp(derive_q_eom(h));
    CHECK(approx_equal(fq.A_q, hp, 1e-12));
    CHECK(approx_equal(fq.A_p, -hq, 1e-12));
    CHECK(approx_equal(fq.D_qq, -hqp, 1e-12));
    CHECK(approx_equal(fq.D_pp, hqp, 1e-12));
    CHECK(approx_equal(fq.D_qp, (hqq - hpp) * Complex{0.5}, 1e-12));
    CHECK(fq.traceless());

    const auto fpp = extract_fp(derive_p_eom(h.with_kind(SymbolKind::Wick)));
    CHECK(approx_equal(fpp.A_q, hp, 1e-12));
    CHECK(approx_equal(fpp.A_p, -hq, 1e-12));
    CHECK(approx_equal(fpp.D_qq, hqp, 1e-12));
    CHECK(approx_equal(fpp.D_pp, -hqp, 1e-12));
    CHECK(approx_equal(fpp.D_qp, (hpp - hqq) * Complex{0.5}, 1e-12));
  }
}

TEST_CASE("sextic Hamiltonian is beyond diffusion") {
  const auto h = mono(3, 3, 1.0, SymbolKind::AntiWick);
  try {
    extract_fp(derive_q_eom(h));
    FAIL("expected BeyondDiffusion");
  } catch (const BeyondDiffusion& e) {
    CHECK(e.order() == 3);
  }
  CHECK(beyond_diffusion_terms(mono(2, 2, 1.0, SymbolKind::AntiWick), Scheme::QFunction, 3).empty());
  CHECK_THROWS_AS(beyond_diffusion_terms(h, Scheme::QFunction, 2), ConfigError);
}

TEST_CASE("third-order block matches the mixed-derivative pattern") {
  std::mt19937_64 rng(48);
  for (int t = 0; t < 10; ++t) {
    PolynomialSymbol h = mono(3, 3, 1.0, SymbolKind::AntiWick);
    if (t > 0) {
      auto extra = random_polynomial(rng, 6, 1, false);
      h = (h + extra + adjoint(extra)).with_kind(SymbolKind::AntiWick);
    }
    const auto terms = beyond_diffusion_terms(h, Scheme::QFunction, 3);
    REQUIRE_FALSE(terms.empty());
    const EomSeries block(Scheme::QFunction, 1, terms);
    const RealSymbol q = random_real_distribution(rng);
    const RealSymbol hr = to_real_variables(h);
    auto X = [&](const RealSymbol& f) { return dq(f, 3) - dq(dp(f, 2)) * Complex{3.0}; };
    auto Y = [&](const RealSymbol& f) { return dp(f, 3) - dp(dq(f, 2)) * Complex{3.0}; };
    const RealSymbol expected = (X(Y(hr) * q) - Y(X(hr) * q)) * Complex{1.0 / (6.0 * 4.0)};
    CHECK(max_coefficient_distance(block.apply(q), expected) <= 1e-11);
    // Same block as the one cut out of the full real series.
    const EomSeries full = to_real_form(derive_q_eom(h));
    CHECK(max_coefficient_distance(full.block(3).apply(q), expected) <= 1e-11);
  }
}

TEST_CASE("quartic Hamiltonians have traceless diffusion and no higher blocks") {
  std::mt19937_64 rng(49);
  for (int t = 0; t < 200; ++t) {
    const auto h = random_quartic_hamiltonian(rng, t % 2 == 0, SymbolKind::AntiWick);
    const EomSeries eom = derive_q_eom(h);
    CHECK(eom.max_n() <= 2);
    CHECK((extract_fp(eom).D_qq + extract_fp(eom).D_pp).is_zero());
  }
}

TEST_CASE("first-order blocks of both schemes are the Liouville drift") {
  std::mt19937_64 rng(50);
  for (int t = 0; t < 30; ++t) {
    auto h = random_polynomial(rng, 6, 1, false);
    h += adjoint(h);
    const RealSymbol hr = to_real_variables(h);
    const RealSymbol q = random_real_distribution(rng);
    const RealSymbol liouville = dp(dq(hr) * q) - dq(dp(hr) * q);
    for (Scheme s : {Scheme::QFunction, Scheme::PFunction}) {
      const auto kind = s == Scheme::QFunction ? SymbolKind::AntiWick : SymbolKind::Wick;
      const RealSymbol drift = to_real_form(derive_eom(h.with_kind(kind), s).block(1)).apply(q);
      CHECK(max_coefficient_distance(drift, liouville) <= 1e-11);
    }
  }
}

TEST_CASE("separable two-mode Hamiltonian has no cross terms") {
  std::mt19937_64 rng(51);
  const auto h1 = random_quartic_hamiltonian(rng, true, SymbolKind::AntiWick);
  const auto h2 = random_quartic_hamiltonian(rng, true, SymbolKind::AntiWick);
  auto embed = [](const PolynomialSymbol& f, std::size_t mode) {
    PolynomialSymbol out(2, f.kind());
    for (const auto& [e, c] : f.terms()) {
      Exponents x(2);
      x.first[mode] = e.first[0];
      x.second[mode] = e.second[0];
      out.add_term(x, c);
    }
    return out;
  };
  const EomSeries joint = derive_q_eom(embed(h1, 0) + embed(h2, 1));
  const std::size_t expected = derive_q_eom(h1).size() + derive_q_eom(h2).size();
  CHECK(joint.size() == expected);
  for (const auto& t : joint.complex_terms()) {
    const bool on0 = t.outer.first[0] + t.outer.second[0] > 0;
    const bool on1 = t.outer.first[1] + t.outer.second[1] > 0;
    CHECK(on0 != on1);
  }
}

TEST_CASE("series terms are sorted by order then outer index") {
  const auto h = mono(3, 3, 1.0, SymbolKind::AntiWick) + mono(2, 2, 1.0, SymbolKind::AntiWick);
  const EomSeries eom = derive_q_eom(h);
  unsigned last = 0;
  for (const auto& t : eom.complex_terms()) {
    CHECK(t.order >= last);
    last = t.order;
  }
  const auto j = to_json(eom);
  CHECK(j.at("max_n") == 3);
  CHECK(j.at("terms").size() == eom.size());
  CHECK(to_json(derive_q_eom(h)).dump() == j.dump());
  const auto fj = to_json(extract_fp(derive_q_eom(mono(2, 2, 1.0, SymbolKind::AntiWick))));
  CHECK(fj.at("traceless") == true);
}

TEST_CASE("Milburn scenario symbols") {
  const double mu = 0.1, w = 2.0;
  const auto sc = milburn_scenario(mu, w);
  CHECK(sc.H_milburn_interaction_aW.kind() == SymbolKind::AntiWick);
  CHECK(std::abs(sc.H_milburn_interaction_aW.coefficient(Exponents({1}, {1})) - Complex(-3.0 * w * mu)) < 1e-15);
  CHECK(std::abs(sc.H_milburn_interaction_aW.coefficient(Exponents({2}, {2})) - Complex(w * mu)) < 1e-15);
  CHECK(std::abs(sc.H_milburn_interaction_aW.coefficient(Exponents({0}, {0})) - Complex(w * mu)) < 1e-15);
  CHECK(same_terms(sc.H_milburn_interaction_W, mono(2, 2, w * mu) + mono(1, 1, w * mu)));
  CHECK(sc.drift_artifact_present);
  CHECK(sc.antiwick_drift_matches_classical);
  CHECK(drift_distance(sc.eom_antiwick, sc.eom_classical) == 0.0);
  CHECK(approx_equal(sc.H_milburn_interaction_W, rotating_frame_wick(sc.H_milburn_lab_W, w), 1e-14));
  CHECK(approx_equal(sc.H_antiwick_quantized, rotating_frame_antiwick(sc.H_antiwick_lab, w), 1e-14));
  CHECK(same_terms(sc.H_antiwick_quantized, mono(2, 2, w * mu) + PolynomialSymbol::constant(w)));
  CHECK_THROWS_AS(milburn_scenario(-1.0, 1.0), ConfigError);
}

TEST_CASE("Milburn equation in operator form") {
  const double mu = 0.25;
  const auto sc = milburn_scenario(mu, 1.0);
  const auto form = operator_form(sc.eom_milburn);
  auto coefficient = [&](unsigned a, unsigned b) {
    for (const auto& [idx, c] : form) {
      if (idx.first[0] == a && idx.second[0] == b) return c;
    }
    return PolynomialSymbol(1);
  };
  // i mu alpha (1 + 2|alpha|^2) d Q + i mu alpha^2 d^2 Q - c.c.
  CHECK(approx_equal(coefficient(1, 0), (mono(1, 0) + mono(2, 1, 2.0)) * (kI * mu), 1e-14));
  CHECK(approx_equal(coefficient(0, 1), (mono(0, 1) + mono(1, 2, 2.0)) * (-kI * mu), 1e-14));
  CHECK(approx_equal(coefficient(2, 0), mono(2, 0, kI * mu), 1e-14));
  CHECK(approx_equal(coefficient(0, 2), mono(0, 2, -kI * mu), 1e-14));
  CHECK(coefficient(0, 0).is_zero(1e-14));
  CHECK(form.size() == 4);
}

TEST_CASE("Milburn scenario with vanishing interaction") {
  const auto sc = milburn_scenario(0.0, 1.0);
  CHECK(sc.eom_milburn.empty());
  CHECK(sc.eom_antiwick.empty());
  CHECK(sc.eom_classical.empty());
  CHECK_FALSE(sc.drift_artifact_present);
}
