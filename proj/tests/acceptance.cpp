// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-gibbslab_cli> [criterion ...]
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gibbslab/bessel_radial.hpp"
#include "gibbslab/gibbs_estimator.hpp"
#include "gibbslab/ground_state.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/tail_lab.hpp"
#include "oracles.hpp"

using namespace gibbslab;
using std::numbers::pi;

namespace {

std::string cli_path;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome critical_mass_1d() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto gs = solve_ground_state(1, 6);
  const double t = seconds_since(t0);
  const double err = rel(gs.mass() * gs.mass(), std::sqrt(3.0) * pi);
  const double identity = std::abs(gs.gns_constant() - 0.5 * 6.0 * std::pow(gs.mass(), -4.0));
  return {err < 1e-8 && identity < 1e-12 && t < 1.0,
          fmt("mass^2 rel err %.2e", err) + fmt(", identity err %.2e", identity) +
              fmt(", %.3f s", t)};
}

Outcome critical_mass_2d() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto gs = solve_ground_state(2, 4);
  const double t = seconds_since(t0);
  const auto townes = oracle::townes();
  // phi(r) = sqrt6 psi(sqrt3 r) rescales the standard profile.
  const double err = rel(gs.mass() * gs.mass(), 2.0 * static_cast<double>(townes.mass_sq));
  return {err < 1e-6 && gs.residual_max() < 1e-8 && t < 10.0,
          fmt("mass^2 rel err %.2e", err) + fmt(", residual %.2e", gs.residual_max()) +
              fmt(", %.2f s", t)};
}

Outcome gns_minimality() {
  std::mt19937_64 rng(12);
  bool ok = true;
  std::string detail;
  for (auto [dim, p, geo] : {std::tuple{1, 6, Geometry::Line}, std::tuple{2, 4, Geometry::Radial}}) {
    const auto gs = solve_ground_state(dim, p);
    const double c = gs.functional_minimum();
    double lowest = 1e300;
    for (int i = 0; i < 1000; ++i)
      lowest = std::min(lowest, gns_functional(oracle::random_bump_function(rng, geo, 5e-3, 25.0), p));
    double worst = 0.0;
    for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double h = 1e-3 / lambda;
      worst = std::max(worst, rel(gns_functional(scaled_profile(gs, lambda, h, gs.extent() / lambda), p), c));
    }
    ok = ok && lowest >= c - 1e-9 && worst < 1e-6;
    detail += fmt("dim%.0f: ", dim) + fmt("min J - C = %.3e", lowest - c) +
              fmt(", rescaled rel %.2e; ", worst);
  }
  return {ok, detail};
}

Outcome gradient_parseval() {
  const std::size_t n = 64;
  const auto table = bessel_zeros(n);
  const RadialQuadrature quad(table, n, radial_node_count(*table, n, 2.0), true);
  double exact = 0.0, quad_err = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto f = RadialField2D::sample(31, s, n, table);
    double g2 = 0.0;
    for (double g : f.gaussians()) g2 += g * g;
    const double e = grad_l2_spectral_sq(f);
    exact = std::max(exact, std::abs(e - g2));
    auto d = evaluate_radial_derivative(f, quad);
    for (double& x : d) x *= x;
    quad_err = std::max(quad_err, rel(quad.integrate(d), e));
  }
  return {exact == 0.0 && quad_err < 1e-6,
          fmt("max |E - sum g^2| = %.1e", exact) + fmt(", quadrature rel %.2e", quad_err)};
}

Outcome chi2_tail_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> level{3.0};
  const auto row = chi2_tail_curve(1, level, 10000000, 5).rows[0];
  const double oracle = 2.0 * normal_sf(3.0);
  bool ok = row.empirical <= std::exp(-2.25) && std::abs(row.empirical - oracle) <= 3.0 * row.error;
  std::size_t checked = 0, violations = 0;
  for (std::size_t m : {1u, 2u, 4u, 8u, 16u}) {
    const double base = 3.0 * std::sqrt(static_cast<double>(m));
    std::vector<double> levels;
    for (int i = 0; i <= 8; ++i) levels.push_back(base + 0.25 * i);
    const auto curve = chi2_tail_curve(m, levels, 2000000, 6 + m);
    for (const auto& r : curve.rows) {
      if (!r.valid || !r.resolvable) continue;
      ++checked;
      if (r.empirical > r.theoretical + 3.0 * r.error) ++violations;
    }
  }
  const double t = seconds_since(t0);
  ok = ok && violations == 0 && t < 60.0;
  return {ok, fmt("P(X^2>=9) = %.6f", row.empirical) + fmt(" +- %.1e", row.error) +
                  fmt(" vs %.6f", oracle) + fmt(", %.0f resolvable grid points", static_cast<double>(checked)) +
                  fmt(", %.0f violations", static_cast<double>(violations)) + fmt(", %.1f s", t)};
}

Outcome mgf_product() {
  bool ok = true;
  std::string detail;
  for (double c : {0.1, 0.25, 0.3}) {
    for (std::size_t m : {1u, 2u, 4u, 8u}) {
      const auto est = mgf_monte_carlo(c, m, 10000000, 77);
      const double exact = gaussian_mgf(c, static_cast<double>(m));
      const double z = (est.mean - exact) / est.error;
      const bool good = std::abs(z) <= 3.0;
      ok = ok && good;
      if (!good) detail += fmt("c=%.2f ", c) + fmt("M=%.0f z=", static_cast<double>(m)) + fmt("%.1f; ", z);
    }
  }
  const double q = rel(gaussian_mgf_quadrature(0.3), gaussian_mgf(0.3, 1.0));
  ok = ok && q < 1e-10;
  return {ok, (detail.empty() ? std::string("all 12 within 3 sigma; ") : detail) +
                  fmt("quadrature rel %.1e", q)};
}

Outcome high_freq_tails() {
  double c_hat = 0.0;
  for (int j = 3; j <= 8; ++j) c_hat = std::max(c_hat, bernstein_probe(j, 6.0, 2000, 3).constant);
  const double c_eff = effective_bernstein_constant(c_hat, Normalization::Gff);
  bool ok = true;
  bool any_valid = false;
  std::string detail = fmt("C_hat %.3f; 1D", c_hat);
  for (int k : {3, 4, 5}) {
    const auto emp = high_freq_empirical(k, 1.0, 6, 128, 100000, 8);
    const auto b = high_freq_tail_bound(k, 1.0, 1.0 / 12.0, 6, c_eff);
    any_valid = any_valid || b.valid;
    ok = ok && emp.probability <= b.bound + 3.0 * emp.error;
    detail += fmt(" k=%.0f:", k) + fmt("%.4f<=", emp.probability) + fmt("%.3g", b.bound);
  }
  const std::vector<double> grid{1.5, 2.0, 3.0};
  double fern = 1e300, block_constant = 0.0;
  for (int j = 2; j <= 6; ++j) {
    const auto est = block_l4_expectation(j, 5000, 13);
    block_constant = std::max(block_constant, est.scaled_constant);
    fern = std::min(fern, fernique_probe(est.norms, grid).c_hat);
  }
  detail += "; 2D";
  for (int k : {3, 4}) {
    const auto emp = block_tail_empirical_2d(k, 1.0, 64, 100000, 3);
    const auto b = block_tail_2d(k, 1.0, 0.25, fern, block_constant);
    any_valid = any_valid || b.valid;
    ok = ok && emp.probability <= b.closing_bound + 3.0 * emp.error;
    detail += fmt(" k=%.0f:", k) + fmt("%.4f<=", emp.probability) + fmt("%.3g", b.closing_bound);
  }
  if (!any_valid) detail += " (bounds outside their validity range; comparison is vacuous)";
  return {ok, detail};
}

Outcome threshold_scan(int dim, int p, double limit_minutes) {
  const auto t0 = std::chrono::steady_clock::now();
  const double mass = solve_ground_state(dim, p).mass();
  EnsembleConfig c;
  c.dim = dim;
  c.p = p;
  c.n_samples = 100000;
  c.seed = 2026;
  c.sampler = SamplerMode::Tilted;
  const std::vector<std::size_t> schedule{16, 32, 64, 128, 256, 512};
  c.K = 0.5 * mass;
  const auto low = divergence_scan(c, schedule);
  c.K = 1.5 * mass;
  const auto high = divergence_scan(c, schedule);
  const double minutes = seconds_since(t0) / 60.0;
  return {low.verdict == Verdict::Stable && high.verdict == Verdict::Diverging && minutes < limit_minutes,
          std::string("0.5: ") + to_string(low.verdict) + fmt(" (slope %.3g", low.slope) +
              fmt(" +- %.2g)", low.slope_error) + ", 1.5: " + to_string(high.verdict) +
              fmt(" (slope %.3g", high.slope) + fmt(" +- %.2g)", high.slope_error) +
              fmt(", %.1f min", minutes)};
}

Outcome layer_cake() {
  EnsembleConfig c;
  c.dim = 1;
  c.p = 4;
  c.K = 1.0;
  c.n_modes = 16;
  c.n_samples = 200000;
  c.seed = 10;
  const auto samples = sample_ensemble(c);
  const auto direct = summarize_partition(samples);
  std::vector<double> levels;
  for (int i = 0; i <= 40000; ++i) levels.push_back(5e-5 * i);
  const auto rec = layer_cake_reconstruct(constrained_tail_curve(samples, levels), c.p);
  const double sigmas = std::abs(rec.estimate - direct.estimate) /
                        std::hypot(rec.standard_error, direct.standard_error);
  return {!rec.inconclusive && sigmas <= 3.0,
          fmt("direct %.8f", direct.estimate) + fmt(", layer cake %.8f", rec.estimate) +
              fmt(", %.2f combined sigma", sigmas)};
}

long double j0_series(long double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int j = 1; j < 120; ++j) {
    term *= -(x * x / 4.0L) / (static_cast<long double>(j) * j);
    sum += term;
  }
  return sum;
}

double series_zero(double lo, double hi) {
  long double a = lo, b = hi;
  const bool positive_at_a = j0_series(a) > 0;
  for (int i = 0; i < 200; ++i) {
    const long double m = (a + b) / 2;
    ((j0_series(m) > 0) == positive_at_a ? a : b) = m;
  }
  return static_cast<double>((a + b) / 2);
}

Outcome bessel_table() {
  const auto table = bessel_zeros(100);
  double worst = 0.0;
  for (double z : table->zeros) worst = std::max(worst, std::abs(bessel_j0(z)));
  const double e1 = std::abs(table->zeros[0] - series_zero(2.0, 3.0));
  const double e2 = std::abs(table->zeros[1] - series_zero(5.0, 6.0));
  return {worst < 1e-12 && e1 < 1e-12 && e2 < 1e-12,
          fmt("max |J0(z_n)| %.1e", worst) + fmt(", z1 err %.1e", e1) + fmt(", z2 err %.1e", e2)};
}

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + cli_path + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome verify_command() {
  if (cli_path.empty()) return {false, "no CLI path given"};
  const auto dir = std::filesystem::temp_directory_path() / "gibbslab-acceptance-verify";
  const auto t0 = std::chrono::steady_clock::now();
  const int clean = run_cli("verify -o \"" + dir.string() + "\"");
  const double minutes = seconds_since(t0) / 60.0;
  const int mutated =
      run_cli("verify --inject-fault drop-j1-normalization -o \"" + (dir / "mutated").string() + "\"");
  const bool junit = std::filesystem::exists(dir / "verify.xml");
  return {clean == 0 && mutated == 1 && minutes < 15.0 && junit,
          fmt("clean exit %.0f", clean) + fmt(" in %.2f min", minutes) +
              fmt(", mutated exit %.0f", mutated) + (junit ? ", JUnit written" : ", JUnit missing")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"critical mass 1D", critical_mass_1d},
      {"critical mass 2D", critical_mass_2d},
      {"GNS minimality", gns_minimality},
      {"gradient Parseval 2D", gradient_parseval},
      {"chi-square tail bound", chi2_tail_criterion},
      {"Gaussian MGF product", mgf_product},
      {"high-frequency tails", high_freq_tails},
      {"threshold scan 1D p=6", [] { return threshold_scan(1, 6, 30.0); }},
      {"threshold scan 2D p=4", [] { return threshold_scan(2, 4, 60.0); }},
      {"layer-cake consistency", layer_cake},
      {"Bessel zero table", bessel_table},
      {"verify command", verify_command},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.passed ? 0 : 1;
    std::printf("%s criterion %2d %s: %s\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
