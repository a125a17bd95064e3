// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "starfield/cli/commands.hpp"
#include "starfield/cli/config.hpp"
#include "starfield/eom/derive.hpp"
#include "starfield/eom/fokker_planck.hpp"
#include "starfield/eom/milburn.hpp"
#include "starfield/oracle/oracle.hpp"
#include "starfield/pde/integrator.hpp"
#include "starfield/star/star_product.hpp"
#include "support/fock_engine.hpp"
#include "support/random_symbols.hpp"

using namespace starfield;
using namespace starfield::symbols;
namespace fs = std::filesystem;

namespace {

constexpr Complex kI{0.0, 1.0};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PolynomialSymbol mono(unsigned m, unsigned n, Complex c = 1.0, SymbolKind k = SymbolKind::Untyped) {
  return PolynomialSymbol::monomial(m, n, c, k);
}

Outcome berezin_value() {
  // omega0 = 2, mu = 1.5 keeps every coefficient an exact binary fraction.
  const double w = 2.0, mu = 1.5;
  const auto wick = (mono(2, 2) + mono(1, 1)) * Complex(w * mu);
  const auto got = berezin_inverse(wick.with_kind(SymbolKind::Wick));
  const auto want = (mono(2, 2) - mono(1, 1, 3.0) + PolynomialSymbol::constant(1.0)) * Complex(w * mu);
  const auto unit = berezin_inverse(mono(2, 2, 1.0, SymbolKind::Wick) + mono(1, 1, 1.0, SymbolKind::Wick));
  const bool ok = same_terms(got, want) && got.kind() == SymbolKind::AntiWick &&
                  same_terms(unit, mono(2, 2) - mono(1, 1, 3.0) + PolynomialSymbol::constant(1.0));
  return {ok, "H_I,aW = " + to_display_string(got)};
}

Outcome shift_identity() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<unsigned> kn(0, 3);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto f = testing::random_polynomial(rng, 5), g = testing::random_polynomial(rng, 5);
    const unsigned k = kn(rng), n = kn(rng);
    worst = std::max(worst, max_coefficient_distance(star::shift_derivatives(f, k, n).apply(g),
                                                     star::shift_derivatives_lhs(f, g, k, n)));
  }
  return {worst <= 1e-12, fmt("max coefficient gap %.3g over 100 pairs", worst)};
}

Outcome complementary_brackets() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t modes = 1 + t % 2;
    const auto f = testing::random_polynomial(rng, 8, modes), g = testing::random_polynomial(rng, 8, modes);
    const auto f_wick = f.with_kind(SymbolKind::Wick), g_wick = g.with_kind(SymbolKind::Wick);
    const auto f_anti = f.with_kind(SymbolKind::AntiWick), g_anti = g.with_kind(SymbolKind::AntiWick);
    worst = std::max(worst, max_coefficient_distance(star::wick_bracket_complementary(berezin_inverse(f_wick), g_wick),
                                                     star::wick_bracket(f_wick, g_wick)));
    worst = std::max(worst, max_coefficient_distance(star::antiwick_bracket_complementary(berezin_forward(f_anti), g_anti),
                                                     star::antiwick_bracket(f_anti, g_anti)));
  }
  return {worst <= 1e-12, fmt("max coefficient gap %.3g over 100 pairs, both orderings", worst)};
}

Outcome traceless_diffusion() {
  std::mt19937_64 rng(103);
  double worst_trace = 0.0;
  std::size_t beyond = 0;
  for (int t = 0; t < 200; ++t) {
    const bool q_scheme = t % 2 == 0;
    const auto h = testing::random_quartic_hamiltonian(rng, t % 4 < 2, q_scheme ? SymbolKind::AntiWick : SymbolKind::Wick);
    const auto series = eom::to_real_form(
        eom::derive_eom(h, q_scheme ? eom::Scheme::QFunction : eom::Scheme::PFunction));
    const auto fp = eom::extract_fp(series);
    const auto trace = fp.D_qq + fp.D_pp;
    for (const auto& [e, c] : trace.terms()) worst_trace = std::max(worst_trace, std::abs(c));
    for (unsigned n = 3; n <= series.max_n(); ++n) beyond += series.block(n).size();
  }
  return {worst_trace == 0.0 && beyond == 0,
          fmt("max |D_qq + D_pp| coefficient %.3g", worst_trace) + ", " + std::to_string(beyond) +
              " terms of order >= 3"};
}

Outcome milburn() {
  const double mu = 0.1;
  const auto sc = eom::milburn_scenario(mu, 1.0);
  const auto form = eom::operator_form(sc.eom_milburn);
  auto coefficient = [&](unsigned a, unsigned b) {
    for (const auto& [idx, c] : form) {
      if (idx.first[0] == a && idx.second[0] == b) return c;
    }
    return PolynomialSymbol(1);
  };
  // i mu alpha (1 + 2|alpha|^2) d Q + i mu alpha^2 d^2 Q + c.c.
  const bool drift = approx_equal(coefficient(1, 0), (mono(1, 0) + mono(2, 1, 2.0)) * (kI * mu), 1e-15) &&
                     approx_equal(coefficient(0, 1), (mono(0, 1) + mono(1, 2, 2.0)) * (-kI * mu), 1e-15) &&
                     approx_equal(coefficient(2, 0), mono(2, 0, kI * mu), 1e-15) &&
                     approx_equal(coefficient(0, 2), mono(0, 2, -kI * mu), 1e-15) && form.size() == 4;
  const double gap = eom::drift_distance(sc.eom_antiwick, sc.eom_classical);
  const bool ok = drift && gap == 0.0 && sc.drift_artifact_present && sc.antiwick_drift_matches_classical;
  return {ok, "d_alpha coefficient " + to_display_string(coefficient(1, 0)) +
                  fmt(", anti-Wick vs classical drift gap %.3g", gap)};
}

Outcome pde_vs_oracle() {
  const double mu = 0.1, tau = 1.0;
  const Complex a0(2.0, 0.0);
  // Normal-ordered mu a+^2 a^2 read as an anti-Wick symbol for the Q scheme.
  const auto h = berezin_inverse(mono(2, 2, mu, SymbolKind::Wick));
  const auto series = eom::to_real_form(eom::derive_q_eom(h));
  pde::IntegratorConfig ic;
  ic.dt = 5e-4;
  ic.t_final = tau;
  ic.enforce_step_bound = false;
  const pde::GridSpec coarse = pde::GridSpec::square_alpha(6.5, 241);
  const pde::GridSpec fine = coarse.refined();
  std::string detail;
  double errors[2] = {0.0, 0.0};
  double peak = 0.0;
  int k = 0;
  bool stable = true;
  for (const auto& spec : {coarse, fine}) {
    const pde::DiscreteEom op(series, spec, ic.stencil_order);
    detail += fmt("n=%.0f: ", static_cast<double>(spec.nq)) +
              fmt("step bound %.3g, ", pde::diffusion_step_bound(op, ic.step_bound_factor));
    try {
      const auto traj = pde::integrate(pde::coherent_state_grid(a0, spec), series, ic);
      const auto exact = oracle::anharmonic_exact_q(spec, tau, a0, mu);
      errors[k] = pde::linf_distance(traj.snapshots.back().grid, exact);
      peak = exact.max_value();
      detail += fmt("Linf %.4g; ", errors[k]);
    } catch (const NumericalInstability& e) {
      detail += fmt("unstable at t=%.4g; ", e.time());
      stable = false;
    }
    ++k;
  }
  if (!stable) return {false, detail + "no refinement ratio"};
  const double ratio = errors[0] / errors[1];
  const double rel = errors[1] / peak;
  return {ratio >= 3.5 && ratio <= 4.5 && rel < 5e-3,
          detail + fmt("ratio %.4g, ", ratio) + fmt("fine Linf/max(Q) %.3g", rel)};
}

Outcome harmonic_rotation() {
  const Complex a0(2.0, 0.0);
  const auto series = eom::to_real_form(eom::derive_q_eom(mono(1, 1, 1.0, SymbolKind::AntiWick)));
  pde::IntegratorConfig ic;
  ic.dt = 0.01;
  ic.t_final = std::numbers::pi / 2;
  ic.snapshot_times = pde::evenly_spaced_times(ic.t_final, 5);
  double errors[2], drift = 0.0;
  int k = 0;
  for (std::size_t n : {81u, 161u}) {
    const auto spec = pde::GridSpec::square_alpha(7.0, n);
    const auto traj = pde::integrate(pde::coherent_state_grid(a0, spec), series, ic);
    for (const auto& s : traj.snapshots) drift = std::max(drift, std::abs(s.norm - 1.0));
    errors[k++] = pde::linf_distance(traj.snapshots.back().grid, oracle::harmonic_rotation_q(spec, ic.t_final, a0));
  }
  const double ratio = errors[0] / errors[1];
  return {ratio >= 3.5 && ratio <= 4.5 && drift < 1e-3,
          fmt("Linf %.4g", errors[0]) + fmt(" -> %.4g", errors[1]) + fmt(", ratio %.4g", ratio) +
              fmt(", max norm drift %.3g", drift)};
}

Outcome revival() {
  const double mu = 0.1;
  const auto spec = pde::GridSpec::square_alpha(6.5, 241);
  const auto q0 = oracle::anharmonic_exact_q(spec, 0.0, Complex(2.0, 0.0), mu);
  const auto qr = oracle::anharmonic_exact_q(spec, std::numbers::pi / mu, Complex(2.0, 0.0), mu);
  const double d = pde::linf_distance(q0, qr);
  return {d < 1e-12, fmt("Linf(tau=0, tau=pi/mu) = %.3g", d)};
}

Outcome ehrenfest() {
  const fs::path dir = fs::temp_directory_path() / "starfield_acceptance_ehrenfest";
  const cli::RunConfig base = cli::parse_run_config(
      {{"hamiltonian", {{"quantization", "classical_antiwick"}, {"preset", "harmonic"}}},
       {"outputs", dir.string()}});
  const auto alpha = cli::cmd_ehrenfest(base, "alpha", {});
  const auto energy = cli::cmd_ehrenfest(base, "hamiltonian", {});
  fs::remove_all(dir);
  const double residual = alpha["max_residual"].get<double>();
  const double ratio = alpha["refinement_ratio"].is_number() ? alpha["refinement_ratio"].get<double>() : 0.0;
  const bool zero = energy["bracket_is_zero"].get<bool>();
  return {residual < 1e-3 && ratio >= 3.5 && ratio <= 4.5 && zero,
          fmt("A = alpha: max residual %.3g", residual) + fmt(", refinement ratio %.4g", ratio) +
              "; A = H bracket " + (zero ? "zero" : "nonzero")};
}

Outcome fock_cross_check() {
  const testing::FockEngine fock(40);
  std::vector<PolynomialSymbol> monomials;
  for (unsigned d = 0; d <= 3; ++d) {
    for (unsigned m = 0; m <= d; ++m) monomials.push_back(mono(m, d - m, 1.0, SymbolKind::Wick));
  }
  double worst = 0.0;
  for (const auto& f : monomials) {
    for (const auto& g : monomials) {
      const auto fg = star::wick_star(f, g);
      const testing::FockEngine::Matrix op = fock.from_wick(f) * fock.from_wick(g);
      for (Complex a : {Complex(0.0), Complex(0.5), Complex(1.0, 0.5)}) {
        const Complex point[] = {a};
        worst = std::max(worst, std::abs(evaluate(fg, point) - fock.sandwich(op, a)));
      }
    }
  }
  return {worst < 1e-8, fmt("max |symbol - <alpha|AB|alpha>| = %.3g", worst) + " over " +
                            std::to_string(monomials.size() * monomials.size()) + " pairs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Berezin value of the interaction Hamiltonian", berezin_value},
      {"surface-derivative identity", shift_identity},
      {"complementary bracket equivalence", complementary_brackets},
      {"traceless diffusion", traceless_diffusion},
      {"Milburn drift and anti-Wick classical limit", milburn},
      {"PDE vs exact anharmonic oracle", pde_vs_oracle},
      {"harmonic rigid rotation", harmonic_rotation},
      {"revival", revival},
      {"Ehrenfest", ehrenfest},
      {"Fock-basis cross-check", fock_cross_check},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str(), secs);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
