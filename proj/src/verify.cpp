// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <tuple>

#include "gibbslab/bessel_radial.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/gibbs_estimator.hpp"
#include "gibbslab/ground_state.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/random.hpp"
#include "gibbslab/records.hpp"
#include "gibbslab/spectral_1d.hpp"
#include "gibbslab/tail_lab.hpp"

namespace gibbslab {

using std::numbers::pi;

namespace {

constexpr const char* kDropJ1 = "drop-j1-normalization";
constexpr std::uint64_t kSeed = 20260101;

using Measured = std::vector<std::pair<std::string, double>>;

struct Check {
  const char* module;
  const char* name;
  std::function<bool(Measured&)> run;
};

struct Context {
  bool drop_j1 = false;
  const GroundState& gs(int dim, int p) {
    auto& slot = dim == 1 ? (p == 6 ? gs16 : gs14) : gs24;
    if (!slot) slot = std::make_unique<GroundState>(solve_ground_state(dim, p));
    return *slot;
  }
  std::unique_ptr<GroundState> gs16, gs14, gs24;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

GridFunction bump_function(StreamRng& rng, Geometry geometry, double spacing,
                           double extent) {
  const auto draw = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const int k = 1 + static_cast<int>(rng.uniform() * 3.0);
  std::vector<double> a(k), w(k), c(k), b(k);
  for (int t = 0; t < k; ++t) {
    a[t] = draw(-1.0, 2.0);
    w[t] = draw(0.3, 3.0);
    c[t] = geometry == Geometry::Line ? draw(-3.0, 3.0) : 0.0;
    b[t] = draw(-0.5, 0.5);
  }
  a[0] = std::abs(a[0]) + 0.1;
  GridFunction f;
  f.geometry = geometry;
  f.spacing = spacing;
  f.origin = geometry == Geometry::Line ? -extent : 0.0;
  const double span = geometry == Geometry::Line ? 2.0 * extent : extent;
  const auto n = static_cast<std::size_t>(std::llround(span / spacing)) + 1;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.origin + static_cast<double>(i) * spacing;
    double v = 0.0;
    for (int t = 0; t < k; ++t) {
      const double z = (x - c[t]) / w[t];
      v += a[t] * (1.0 + b[t] * z * z) * std::exp(-z * z);
    }
    f.values[i] = v;
  }
  return f;
}

std::vector<Check> build_checks(Context& ctx) {
  std::vector<Check> checks;

  // spectral_1d
  checks.push_back({"spectral_1d", "gff_energy_exact", [](Measured& m) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto f = SpectralField1D::sample(kSeed, s, 64);
      double g2 = 0.0;
      for (double x : f.whitened()) g2 += x * x;
      worst = std::max(worst, std::abs(h1_seminorm_sq(f) - g2));
    }
    m.emplace_back("max_abs_diff", worst);
    return worst == 0.0;
  }});
  checks.push_back({"spectral_1d", "fft_matches_direct_sum", [](Measured& m) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto f = SpectralField1D::sample(kSeed, s, 32);
      const auto a = evaluate_grid(f, 256), b = evaluate_grid_direct(f, 256);
      for (std::size_t i = 0; i < 256; ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    }
    m.emplace_back("max_abs_diff", worst);
    return worst < 1e-12;
  }});
  checks.push_back({"spectral_1d", "parseval_quadrature", [](Measured& m) {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto f = SpectralField1D::sample(kSeed + 1, s, 128);
      const double quad = std::pow(lp_norm(evaluate_grid(f, 512), 2.0), 2.0);
      worst = std::max(worst, rel(quad, l2_norm_spectral_sq(f)));
    }
    m.emplace_back("max_rel_diff", worst);
    return worst < 1e-12;
  }});
  checks.push_back({"spectral_1d", "dyadic_partition", [](Measured& m) {
    const auto f = SpectralField1D::sample(kSeed, 3, 100);
    double worst = 0.0;
    for (int k = 1; k <= 7; ++k) {
      const auto lo = dyadic_project(f, ProjectionKind::Low, k - 1);
      const auto hi = dyadic_project(f, ProjectionKind::High, k);
      for (std::size_t i = 0; i < f.whitened().size(); ++i)
        worst = std::max(worst, std::abs(lo.whitened()[i] + hi.whitened()[i] - f.whitened()[i]));
    }
    m.emplace_back("max_abs_diff", worst);
    return worst == 0.0;
  }});

  // bessel_radial
  checks.push_back({"bessel_radial", "zero_table", [](Measured& m) {
    const auto table = bessel_zeros(100);
    double worst = 0.0;
    for (double z : table->zeros) worst = std::max(worst, std::abs(bessel_j0(z)));
    m.emplace_back("max_abs_j0", worst);
    m.emplace_back("z1", table->zeros[0]);
    m.emplace_back("z2", table->zeros[1]);
    const double e1 = std::abs(table->zeros[0] - 2.404825557695773);
    const double e2 = std::abs(table->zeros[1] - 5.520078110286311);
    m.emplace_back("z1_error", e1);
    m.emplace_back("z2_error", e2);
    return worst < 1e-12 && e1 < 1e-12 && e2 < 1e-12;
  }});
  checks.push_back({"bessel_radial", "mode_orthonormality", [](Measured& m) {
    const auto table = bessel_zeros(64);
    const RadialQuadrature quad(table, 64, radial_node_count(*table, 64, 2.0));
    double worst = 0.0;
    std::vector<double> prod(quad.node_count());
    for (std::size_t a = 1; a <= 24; ++a)
      for (std::size_t b = a; b <= 24; ++b) {
        for (std::size_t q = 0; q < prod.size(); ++q) prod[q] = quad.basis(q, a) * quad.basis(q, b);
        worst = std::max(worst, std::abs(quad.integrate(prod) - (a == b ? 1.0 : 0.0)));
      }
    m.emplace_back("max_gram_error", worst);
    return worst < 1e-8;
  }});
  checks.push_back({"bessel_radial", "gradient_parseval", [&ctx](Measured& m) {
    const std::size_t n = 64;
    const auto table = bessel_zeros(n);
    const RadialQuadrature quad(table, n, radial_node_count(*table, n, 2.0), true);
    const auto convention =
        ctx.drop_j1 ? RadialConvention::PaperLiteral : RadialConvention::Normalized;
    double exact_worst = 0.0, quad_worst = 0.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const auto f = RadialField2D::sample(kSeed, s, n, table, convention);
      double g2 = 0.0;
      for (double g : f.gaussians()) g2 += g * g;
      const double spectral = grad_l2_spectral_sq(f);
      exact_worst = std::max(exact_worst, std::abs(spectral - g2) / g2);
      auto d = evaluate_radial_derivative(f, quad);
      for (double& x : d) x *= x;
      quad_worst = std::max(quad_worst, rel(quad.integrate(d), spectral));
    }
    m.emplace_back("max_rel_spectral_vs_gaussians", exact_worst);
    m.emplace_back("max_rel_quadrature_vs_spectral", quad_worst);
    return exact_worst == 0.0 && quad_worst < 1e-6;
  }});
  checks.push_back({"bessel_radial", "block_l4_scaling", [](Measured& m) {
    double lo = 1e300, hi = 0.0;
    for (int j = 3; j <= 6; ++j) {
      const auto est = block_l4_expectation(j, 2000, kSeed);
      lo = std::min(lo, est.scaled_constant);
      hi = std::max(hi, est.scaled_constant);
    }
    m.emplace_back("constant_min", lo);
    m.emplace_back("constant_max", hi);
    return hi / lo < 1.3;
  }});

  // ground_state
  checks.push_back({"ground_state", "mass_1d_closed_form", [&ctx](Measured& m) {
    const auto& gs = ctx.gs(1, 6);
    const double mass_sq = gs.mass() * gs.mass();
    const double identity = std::abs(gs.gns_constant() * std::pow(gs.mass(), 4) - 3.0);
    m.emplace_back("mass_squared", mass_sq);
    m.emplace_back("rel_error", rel(mass_sq, std::sqrt(3.0) * pi));
    m.emplace_back("constant_identity_error", identity);
    m.emplace_back("residual_max", gs.residual_max());
    return rel(mass_sq, std::sqrt(3.0) * pi) < 1e-8 && identity < 1e-12 &&
           gs.residual_max() < 1e-8;
  }});
  checks.push_back({"ground_state", "shooting_2d", [&ctx](Measured& m) {
    const auto& gs = ctx.gs(2, 4);
    const double mass_sq = gs.mass() * gs.mass();
    const double pohozaev = rel(gs.grad_norm() * gs.grad_norm(), 3.0 * mass_sq);
    m.emplace_back("mass_squared", mass_sq);
    m.emplace_back("residual_max", gs.residual_max());
    m.emplace_back("edge_ratio", gs.edge_ratio());
    m.emplace_back("pohozaev_rel_error", pohozaev);
    return gs.residual_max() < 1e-8 && gs.edge_ratio() < 1e-8 && pohozaev < 1e-6;
  }});
  checks.push_back({"ground_state", "functional_minimality", [&ctx](Measured& m) {
    StreamRng rng(kSeed, 77);
    bool ok = true;
    for (auto [dim, p, geo] : {std::tuple{1, 6, Geometry::Line}, std::tuple{2, 4, Geometry::Radial}}) {
      const auto& gs = ctx.gs(dim, p);
      double lowest = 1e300;
      for (int i = 0; i < 1000; ++i)
        lowest = std::min(lowest, gns_functional(bump_function(rng, geo, 5e-3, 25.0), p));
      const double margin = lowest - gs.functional_minimum();
      m.emplace_back("margin_dim" + std::to_string(dim), margin);
      ok = ok && margin >= -1e-9;
    }
    return ok;
  }});
  checks.push_back({"ground_state", "scale_invariance", [&ctx](Measured& m) {
    double worst = 0.0;
    for (auto [dim, p] : {std::pair{1, 6}, std::pair{2, 4}}) {
      const auto& gs = ctx.gs(dim, p);
      for (double lambda : {0.5, 2.0}) {
        const double h = 1e-3 / lambda;
        const auto f = scaled_profile(gs, lambda, h, gs.extent() / lambda);
        worst = std::max(worst, rel(gns_functional(f, p), gs.functional_minimum()));
      }
    }
    m.emplace_back("max_rel_error", worst);
    return worst < 1e-6;
  }});
  checks.push_back({"ground_state", "disc_inequality", [&ctx](Measured& m) {
    const auto& gs = ctx.gs(2, 4);
    const auto table = bessel_zeros(64);
    const RadialQuadrature quad(table, 64, radial_node_count(*table, 64, 4.0));
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 1000; ++s)
      worst = std::max(worst, disc_gns_check(RadialField2D::sample(kSeed, s, 64, table), gs, quad));
    m.emplace_back("max_ratio", worst);
    return worst <= 1.0 + 1e-9;
  }});

  // tail_lab
  checks.push_back({"tail_lab", "chi2_single_normal", [](Measured& m) {
    const std::vector<double> levels{3.0};
    const auto curve = chi2_tail_curve(1, levels, 1000000, kSeed);
    const auto& row = curve.rows[0];
    const double oracle = 2.0 * normal_sf(3.0);
    m.emplace_back("empirical", row.empirical);
    m.emplace_back("error", row.error);
    m.emplace_back("oracle", oracle);
    m.emplace_back("bound", row.theoretical);
    return row.empirical <= row.theoretical && std::abs(row.empirical - oracle) <= 3.0 * row.error;
  }});
  checks.push_back({"tail_lab", "chi2_valid_grid", [](Measured& m) {
    std::size_t violations = 0;
    for (std::size_t dof : {1u, 2u, 4u, 8u}) {
      const double base = 3.0 * std::sqrt(static_cast<double>(dof));
      const std::vector<double> levels{base, base + 0.5, base + 1.0};
      violations += chi2_tail_curve(dof, levels, 100000, kSeed).violations(3.0).size();
    }
    m.emplace_back("violations", static_cast<double>(violations));
    return violations == 0;
  }});
  checks.push_back({"tail_lab", "mgf_quadrature", [](Measured& m) {
    double worst = 0.0;
    for (double c : {0.1, 0.25, 0.3})
      worst = std::max(worst, rel(gaussian_mgf_quadrature(c), gaussian_mgf(c, 1.0)));
    m.emplace_back("max_rel_error", worst);
    return worst < 1e-10;
  }});
  checks.push_back({"tail_lab", "mgf_monte_carlo", [](Measured& m) {
    double worst = 0.0;
    for (std::size_t dof : {1u, 4u}) {
      const auto est = mgf_monte_carlo(0.1, dof, 200000, kSeed);
      worst = std::max(worst, std::abs(est.mean - gaussian_mgf(0.1, static_cast<double>(dof))) / est.error);
    }
    m.emplace_back("max_sigmas", worst);
    return worst <= 3.0;
  }});
  checks.push_back({"tail_lab", "high_freq_bound", [](Measured& m) {
    double c_hat = 0.0;
    for (int j = 3; j <= 8; ++j) c_hat = std::max(c_hat, bernstein_probe(j, 6.0, 1000, kSeed).constant);
    const double c_eff = effective_bernstein_constant(c_hat, Normalization::Gff);
    m.emplace_back("bernstein_constant", c_hat);
    bool ok = true;
    for (int k : {3, 4, 5}) {
      const auto emp = high_freq_empirical(k, 1.0, 6, 128, 5000, kSeed);
      const auto bound = high_freq_tail_bound(k, 1.0, 1.0 / 12.0, 6, c_eff);
      m.emplace_back("empirical_k" + std::to_string(k), emp.probability);
      m.emplace_back("bound_k" + std::to_string(k), bound.bound);
      ok = ok && emp.probability <= bound.bound + 3.0 * emp.error;
    }
    return ok;
  }});
  checks.push_back({"tail_lab", "block_tail_2d", [](Measured& m) {
    const std::vector<double> grid{1.5, 2.0, 3.0};
    double c_hat = 1e300, block_constant = 0.0;
    for (int j = 2; j <= 6; ++j) {
      const auto est = block_l4_expectation(j, 1000, kSeed);
      block_constant = std::max(block_constant, est.scaled_constant);
      c_hat = std::min(c_hat, fernique_probe(est.norms, grid).c_hat);
    }
    m.emplace_back("fernique_constant", c_hat);
    m.emplace_back("block_constant", block_constant);
    bool ok = true;
    for (int k : {3, 4}) {
      const auto emp = block_tail_empirical_2d(k, 1.0, 64, 2000, kSeed);
      const auto b = block_tail_2d(k, 1.0, 0.25, c_hat, block_constant);
      m.emplace_back("empirical_k" + std::to_string(k), emp.probability);
      m.emplace_back("bound_k" + std::to_string(k), b.closing_bound);
      ok = ok && emp.probability <= std::min(1.0, b.closing_bound) + 3.0 * emp.error;
    }
    return ok;
  }});

  // gibbs_estimator
  checks.push_back({"gibbs_estimator", "degenerate_cutoffs", [](Measured& m) {
    EnsembleConfig c;
    c.p = 4;
    c.n_modes = 16;
    c.n_samples = 2000;
    c.seed = kSeed;
    c.K = 0.0;
    const double zero = estimate_partition(c).estimate;
    c.K = EnsembleConfig::kNoCutoff;
    c.calibration = true;
    const double one = estimate_partition(c).estimate;
    m.emplace_back("K_zero", zero);
    m.emplace_back("calibration", one);
    return zero == 0.0 && std::abs(one - 1.0) < 1e-12;
  }});
  checks.push_back({"gibbs_estimator", "tilted_matches_plain", [](Measured& m) {
    EnsembleConfig c;
    c.p = 4;
    c.K = 1.0;
    c.n_modes = 16;
    c.n_samples = 20000;
    c.seed = kSeed;
    const auto plain = estimate_partition(c);
    c.sampler = SamplerMode::Tilted;
    const auto tilted = estimate_partition(c);
    const double sigmas = std::abs(plain.estimate - tilted.estimate) /
                          std::hypot(plain.standard_error, tilted.standard_error);
    m.emplace_back("plain", plain.estimate);
    m.emplace_back("tilted", tilted.estimate);
    m.emplace_back("sigmas", sigmas);
    return sigmas <= 3.0;
  }});
  checks.push_back({"gibbs_estimator", "layer_cake", [](Measured& m) {
    EnsembleConfig c;
    c.p = 4;
    c.K = 1.0;
    c.n_modes = 16;
    c.n_samples = 20000;
    c.seed = kSeed;
    const auto samples = sample_ensemble(c);
    const auto direct = summarize_partition(samples);
    std::vector<double> levels;
    for (int i = 0; i <= 20000; ++i) levels.push_back(1e-4 * i);
    const auto rec = layer_cake_reconstruct(constrained_tail_curve(samples, levels), c.p);
    const double sigmas = std::abs(rec.estimate - direct.estimate) /
                          std::hypot(rec.standard_error, direct.standard_error);
    m.emplace_back("direct", direct.estimate);
    m.emplace_back("reconstructed", rec.estimate);
    m.emplace_back("sigmas", sigmas);
    return !rec.inconclusive && sigmas <= 3.0;
  }});
  checks.push_back({"gibbs_estimator", "verdict_pattern", [&ctx](Measured& m) {
    EnsembleConfig c;
    c.p = 6;
    c.n_samples = 2000;
    c.seed = kSeed;
    c.sampler = SamplerMode::Tilted;
    const std::vector<std::size_t> schedule{16, 32, 64};
    const double mass = ctx.gs(1, 6).mass();
    c.K = 0.5 * mass;
    const auto low = divergence_scan(c, schedule);
    c.K = 1.5 * mass;
    const auto high = divergence_scan(c, schedule);
    m.emplace_back("slope_low", low.slope);
    m.emplace_back("slope_high", high.slope);
    return low.verdict == Verdict::Stable && high.verdict == Verdict::Diverging;
  }});
  return checks;
}

}  // namespace

std::vector<std::string> known_faults() { return {kDropJ1}; }

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(const VerifyOptions& options) {
  Context ctx;
  for (const auto& f : options.faults) {
    if (f == kDropJ1) {
      ctx.drop_j1 = true;
    } else {
      fail(ErrorKind::InvalidArgument, "unknown fault '" + f + "'");
    }
  }
  VerifyReport report;
  report.faults = options.faults;
  const auto start = std::chrono::steady_clock::now();
  for (auto& check : build_checks(ctx)) {
    CheckResult result;
    result.module = check.module;
    result.name = check.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      result.passed = check.run(result.measured);
      if (!result.passed) result.message = "invariant violated";
    } catch (const std::exception& e) {
      result.passed = false;
      result.message = e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.checks.push_back(std::move(result));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string to_junit(const VerifyReport& report) {
  std::vector<JUnitCase> cases;
  for (const auto& c : report.checks) {
    JUnitCase jc;
    jc.classname = "gibbslab." + c.module;
    jc.name = c.name;
    jc.seconds = c.seconds;
    jc.passed = c.passed;
    jc.message = c.message;
    for (const auto& [k, v] : c.measured) jc.properties.emplace_back(k, format_double(v));
    cases.push_back(std::move(jc));
  }
  std::string name = "gibbslab.verify";
  for (const auto& f : report.faults) name += "+" + f;
  return junit_xml(name, cases);
}

}  // namespace gibbslab
