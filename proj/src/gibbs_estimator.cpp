// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/gibbs_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include <json.hpp>

#include "gibbslab/error.hpp"
#include "gibbslab/ground_state.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/random.hpp"

namespace gibbslab {

using std::numbers::pi;

const char* to_string(SamplerMode mode) noexcept {
  return mode == SamplerMode::Plain ? "plain" : "tilted";
}

SamplerMode sampler_from_string(const std::string& name) {
  if (name == "plain") return SamplerMode::Plain;
  if (name == "tilted") return SamplerMode::Tilted;
  fail(ErrorKind::InvalidArgument, "unknown sampler '" + name + "' (expected plain or tilted)");
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Diverging: return "diverging";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void EnsembleConfig::validate() const {
  require(dim == 1 || dim == 2, "ensemble: dim must be 1 or 2");
  require(p > 2 && p % 2 == 0, "ensemble: p must be an even integer > 2");
  require(K >= 0.0 && !std::isnan(K), "ensemble: K must be nonnegative");
  require(n_modes >= 1, "ensemble: n_modes must be at least 1");
  require(n_samples >= 1, "ensemble: n_samples must be at least 1");
  require(tilt.mixture > 0.0 && tilt.mixture < 1.0, "ensemble: tilt mixture must lie in (0, 1)");
  require(tilt.scale_count >= 1, "ensemble: at least one tilt scale");
  if (resolution != 0) {
    if (dim == 1 && resolution < minimum_grid_size(n_modes))
      fail(ErrorKind::Resolution, "ensemble: grid size " + std::to_string(resolution) +
                                      " below 4N = " + std::to_string(minimum_grid_size(n_modes)));
    if (dim == 2) {
      const auto table = bessel_zeros(n_modes);
      if (resolution < minimum_radial_nodes(*table, n_modes))
        fail(ErrorKind::Resolution, "ensemble: radial node count below the resolving minimum");
    }
  }
}

double EstimatorReport::log_scale_error() const {
  if (!std::isfinite(log_estimate)) return std::numeric_limits<double>::infinity();
  return std::exp(log_standard_error - log_estimate);
}

namespace {

std::shared_ptr<const GroundState> cached_ground_state(int dim, int p) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const GroundState>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, p}];
  if (!slot) slot = std::make_shared<const GroundState>(solve_ground_state(dim, p));
  return slot;
}

/// Maps whitened Gaussian coordinates to the field quantities of one ensemble.
class FieldModel {
 public:
  explicit FieldModel(const EnsembleConfig& cfg) : cfg_(cfg) {
    if (cfg.dim == 1) {
      grid_ = cfg.resolution ? cfg.resolution : exact_grid_size(cfg.n_modes, cfg.p);
      const auto probe = SpectralField1D::zero(cfg.n_modes, cfg.normalization);
      scales_.resize(2 * cfg.n_modes);
      for (std::size_t n = 1; n <= cfg.n_modes; ++n)
        scales_[2 * (n - 1)] = scales_[2 * (n - 1) + 1] = probe.weight(n);
    } else {
      table_ = bessel_zeros(cfg.n_modes);
      const std::size_t nodes =
          cfg.resolution ? cfg.resolution : radial_node_count(*table_, cfg.n_modes, cfg.p);
      quad_ = std::make_shared<RadialQuadrature>(table_, cfg.n_modes, nodes);
      factor_.assign(cfg.n_modes, 1.0);
      if (cfg.convention == RadialConvention::PaperLiteral)
        for (std::size_t i = 0; i < cfg.n_modes; ++i) factor_[i] = std::abs(table_->j1_at_zeros[i]);
      scales_.resize(cfg.n_modes);
      for (std::size_t i = 0; i < cfg.n_modes; ++i) scales_[i] = factor_[i] / table_->zeros[i];
    }
  }

  std::size_t dimension() const { return scales_.size(); }
  std::span<const double> scales() const { return scales_; }

  double l2_sq(std::span<const double> g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += scales_[i] * scales_[i] * g[i] * g[i];
    return s;
  }

  double lp_integral(std::span<const double> g) const {
    if (cfg_.dim == 1) {
      const auto u = SpectralField1D::from_whitened(cfg_.normalization,
                                                    std::vector<double>(g.begin(), g.end()));
      return gibbslab::lp_integral(evaluate_grid(u, grid_), cfg_.p);
    }
    std::vector<double> xi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) xi[i] = g[i] * factor_[i];
    return radial_lp_integral(RadialField2D::from_energy_coordinates(table_, std::move(xi)),
                              cfg_.p, *quad_);
  }

  /// Whitened coordinates of the ground state concentrated at scale L.
  std::vector<double> profile_coordinates(const GroundState& gs, double scale) const {
    std::vector<double> h(dimension(), 0.0);
    if (cfg_.dim == 1) {
      const auto x = gs.grid();
      const auto phi = gs.profile();
      std::vector<double> integrand(x.size());
      const auto probe = SpectralField1D::zero(cfg_.n_modes, cfg_.normalization);
      for (std::size_t n = 1; n <= cfg_.n_modes; ++n) {
        const double k = 2.0 * pi * static_cast<double>(n) * scale;
        for (std::size_t i = 0; i < x.size(); ++i) integrand[i] = phi[i] * std::cos(k * x[i]);
        const double transform = 2.0 * simpson(integrand, gs.spacing());
        const double c = scale * (n % 2 ? -1.0 : 1.0) * transform;
        h[2 * (n - 1)] = std::sqrt(2.0) * c / probe.weight(n);
      }
    } else {
      const auto v = project_profile_to_disc(gs, scale, table_, cfg_.n_modes);
      const auto xi = v.energy_coordinates();
      for (std::size_t i = 0; i < h.size(); ++i) h[i] = xi[i] / factor_[i];
    }
    return h;
  }

 private:
  EnsembleConfig cfg_;
  std::size_t grid_ = 0;
  std::shared_ptr<const BesselTable> table_;
  std::shared_ptr<RadialQuadrature> quad_;
  std::vector<double> factor_;
  std::vector<double> scales_;
};

struct Tilt {
  std::vector<double> shift;
  double action = std::numeric_limits<double>::quiet_NaN();
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Tilt fallback_tilt(const FieldModel& model, const EnsembleConfig& cfg) {
  Tilt t;
  t.shift.assign(model.dimension(), 0.0);
  const std::size_t stride = cfg.dim == 1 ? 2 : 1;
  for (std::size_t n = 0; n < std::min(cfg.tilt.fallback_modes, cfg.n_modes); ++n)
    t.shift[n * stride] = cfg.tilt.fallback_amplitude;
  return t;
}

/// Laplace-type centre: the concentrated ground state scaled just inside the
/// cutoff, at the concentration scale with the largest action.
Tilt build_tilt(const FieldModel& model, const EnsembleConfig& cfg) {
  if (!std::isfinite(cfg.K) || cfg.calibration || cfg.K == 0.0) return fallback_tilt(model, cfg);
  const auto gs = cached_ground_state(cfg.dim, cfg.p);
  const auto s = model.scales();
  double noise_mean = 0.0, noise_var = 0.0;
  for (double x : s) {
    noise_mean += x * x;
    noise_var += 2.0 * x * x * x * x;
  }
  const double k2_full = cfg.K * cfg.K;
  const double l_max = 0.25;
  const double l_min = std::min(l_max, (cfg.dim == 1 ? 0.5 : 1.0) / static_cast<double>(cfg.n_modes));
  const std::size_t count = cfg.tilt.scale_count;
  double best_action = -std::numeric_limits<double>::infinity();
  std::vector<double> best;
  for (std::size_t c = 0; c < count; ++c) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(c) / static_cast<double>(count - 1);
    const double scale = l_max * std::pow(l_min / l_max, frac);
    std::vector<double> v = model.profile_coordinates(*gs, scale);
    const double norm2 = model.l2_sq(v);
    if (!(norm2 > 0.0)) continue;
    double cross = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) cross += std::pow(s[i], 4) * v[i] * v[i];
    double k2 = k2_full;
    for (int iter = 0; iter < 3; ++iter)
      k2 = std::max(0.25 * k2_full,
                    k2_full - noise_mean - 3.0 * std::sqrt(noise_var + 4.0 * cross * k2 / norm2));
    const double factor = std::sqrt(k2 / norm2);
    for (double& x : v) x *= factor;
    const double action = model.lp_integral(v) / cfg.p - 0.5 * dot(v, v);
    if (action > best_action) {
      best_action = action;
      best = std::move(v);
    }
  }
  if (!(best_action > 0.0)) {
    Tilt t = fallback_tilt(model, cfg);
    t.action = best_action;
    return t;
  }
  return {std::move(best), best_action};
}

/// log(alpha e^t + 1 - alpha) without overflow.
double log_mixture(double alpha, double t) {
  if (t > 0.0) return t + std::log(alpha + (1.0 - alpha) * std::exp(-t));
  return std::log1p(alpha * std::expm1(t));
}

struct WeightedMean {
  double mean = 0.0;
  double error = 0.0;
};

WeightedMean mean_and_error(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - mean) * (values[i] - mean);
  const double var = values.size() > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

EnsembleSamples sample_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();
  const FieldModel model(cfg);
  EnsembleSamples out;
  out.config = cfg;
  const std::size_t n = cfg.n_samples;
  out.log_ratio.assign(n, 0.0);
  out.lp_integral.assign(n, 0.0);
  out.l2_sq.assign(n, 0.0);

  Tilt tilt;
  if (cfg.sampler == SamplerMode::Tilted) {
    tilt = build_tilt(model, cfg);
    out.tilt_action = tilt.action;
  }
  const double shift_sq = tilt.shift.empty() ? 0.0 : dot(tilt.shift, tilt.shift);
  const std::uint64_t key = derive_seed(cfg.seed, 0x5a3d0000ull + static_cast<std::uint64_t>(cfg.dim));
  const std::uint64_t mix_key = derive_seed(key, 0x3117ull);
  const double alpha = cfg.tilt.mixture;
  const double k2 = cfg.K * cfg.K;
  const std::size_t d = model.dimension();

  parallel_for(n, [&](std::size_t i) {
    StreamRng rng(key, i);
    std::vector<double> g(d);
    for (double& x : g) x = rng.normal();
    if (cfg.sampler == SamplerMode::Tilted) {
      StreamRng mix(mix_key, i);
      if (mix.uniform() < alpha)
        for (std::size_t j = 0; j < d; ++j) g[j] += tilt.shift[j];
      out.log_ratio[i] = -log_mixture(alpha, dot(tilt.shift, g) - 0.5 * shift_sq);
    }
    out.l2_sq[i] = model.l2_sq(g);
    if (out.l2_sq[i] <= k2) out.lp_integral[i] = model.lp_integral(g);
  });
  return out;
}

EstimatorReport summarize_partition(const EnsembleSamples& s) {
  const auto& cfg = s.config;
  const std::size_t n = s.log_ratio.size();
  require(n >= 1, "summarize_partition: no samples");
  EstimatorReport r;
  r.n_modes = cfg.n_modes;
  r.n_samples = n;
  r.seed = cfg.seed;
  r.sampler = cfg.sampler;
  r.tilt_action = s.tilt_action;

  std::vector<double> lw(n), inside_ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.inside(i)) {
      lw[i] = s.log_ratio[i] + (cfg.calibration ? 0.0 : s.lp_integral[i] / cfg.p);
      inside_ratio[i] = std::exp(s.log_ratio[i]);
    } else {
      lw[i] = -std::numeric_limits<double>::infinity();
      inside_ratio[i] = 0.0;
    }
  }
  r.fraction_inside_cutoff = std::clamp(pairwise_sum(inside_ratio) / static_cast<double>(n), 0.0, 1.0);
  const double peak = *std::max_element(lw.begin(), lw.end());
  if (!std::isfinite(peak)) {
    r.estimate = 0.0;
    r.standard_error = 0.0;
    return r;
  }
  std::vector<double> w(n), w2(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(lw[i] - peak);
    w2[i] = w[i] * w[i];
  }
  const double s1 = pairwise_sum(w), s2 = pairwise_sum(w2);
  const double nn = static_cast<double>(n);
  r.log_estimate = peak + std::log(s1 / nn);
  const double mean = s1 / nn;
  const double var = n > 1 ? std::max(0.0, (s2 / nn - mean * mean) * nn / (nn - 1.0)) : 0.0;
  r.log_standard_error = var > 0.0 ? peak + 0.5 * std::log(var / nn)
                                   : -std::numeric_limits<double>::infinity();
  r.estimate = std::exp(r.log_estimate);
  r.standard_error = std::exp(r.log_standard_error);
  r.effective_sample_size = s1 * s1 / s2;
  return r;
}

EstimatorReport estimate_partition(const EnsembleConfig& cfg) {
  return summarize_partition(sample_ensemble(cfg));
}

EstimatorReport constrained_tail(const EnsembleSamples& s, double lambda) {
  require(lambda >= 0.0, "constrained_tail: lambda must be nonnegative");
  const std::size_t n = s.log_ratio.size();
  const double threshold = std::pow(lambda, s.config.p);
  std::vector<double> v(n, 0.0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (s.inside(i) && s.lp_integral[i] > threshold) {
      v[i] = std::exp(s.log_ratio[i]);
      ++hits;
    }
  const auto m = mean_and_error(v);
  EstimatorReport r = summarize_partition(s);
  r.estimate = m.mean;
  r.standard_error = m.error;
  r.log_estimate = m.mean > 0.0 ? std::log(m.mean) : -std::numeric_limits<double>::infinity();
  r.log_standard_error = m.error > 0.0 ? std::log(m.error) : -std::numeric_limits<double>::infinity();
  r.effective_sample_size = static_cast<double>(hits);
  return r;
}

EstimatorReport constrained_tail(const EnsembleConfig& cfg, double lambda) {
  return constrained_tail(sample_ensemble(cfg), lambda);
}

TailCurve constrained_tail_curve(const EnsembleSamples& s, std::span<const double> levels) {
  require(!levels.empty() && levels.front() == 0.0, "constrained_tail_curve: levels must start at 0");
  const auto& cfg = s.config;
  const std::size_t n = s.log_ratio.size();
  // Inside samples sorted by L^p norm; a level's event is a suffix.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (s.inside(i)) order.push_back(i);
  std::vector<double> norm(n, 0.0);
  for (std::size_t i : order) norm[i] = std::pow(s.lp_integral[i], 1.0 / cfg.p);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norm[a] < norm[b]; });
  std::vector<double> suffix1(order.size() + 1, 0.0), suffix2(order.size() + 1, 0.0);
  for (std::size_t k = order.size(); k-- > 0;) {
    const double w = std::exp(s.log_ratio[order[k]]);
    suffix1[k] = suffix1[k + 1] + w;
    suffix2[k] = suffix2[k + 1] + w * w;
  }
  TailCurve curve;
  const double nn = static_cast<double>(n);
  for (double level : levels) {
    const auto first = std::upper_bound(order.begin(), order.end(), level,
                                        [&](double l, std::size_t i) { return l < norm[i]; });
    const auto k = static_cast<std::size_t>(first - order.begin());
    const double mean = suffix1[k] / nn;
    const double var = n > 1 ? std::max(0.0, (suffix2[k] / nn - mean * mean) * nn / (nn - 1.0)) : 0.0;
    TailRow row;
    row.level = level;
    row.empirical = std::clamp(mean, 0.0, 1.0);
    row.error = std::sqrt(var / nn);
    row.resolvable = order.size() - k >= kResolvableHits;
    curve.rows.push_back(row);
  }
  curve.metadata = {{"kind", "constrained_tail"},
                    {"dim", std::to_string(cfg.dim)},
                    {"p", std::to_string(cfg.p)},
                    {"K", std::to_string(cfg.K)},
                    {"N", std::to_string(cfg.n_modes)},
                    {"samples", std::to_string(n)},
                    {"seed", std::to_string(cfg.seed)},
                    {"sampler", to_string(cfg.sampler)}};
  curve.validate();
  return curve;
}

LayerCakeResult layer_cake_reconstruct(const TailCurve& tail, double p) {
  tail.validate();
  require(tail.rows.size() >= 2, "layer_cake_reconstruct: need at least two levels");
  require(tail.rows.front().level == 0.0, "layer_cake_reconstruct: first level must be 0");
  require(p > 0.0, "layer_cake_reconstruct: p must be positive");
  const auto& rows = tail.rows;
  const std::size_t m = rows.size();
  std::vector<double> density(m), value(m), error(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double l = rows[i].level;
    density[i] = std::pow(l, p - 1.0) * std::exp(std::pow(l, p) / p);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i > 0 ? rows[i].level - rows[i - 1].level : 0.0;
    const double right = i + 1 < m ? rows[i + 1].level - rows[i].level : 0.0;
    const double w = 0.5 * (left + right);
    value[i] = w * density[i] * rows[i].empirical;
    error[i] = w * density[i] * rows[i].error;
  }
  LayerCakeResult r;
  r.estimate = rows.front().empirical + pairwise_sum(value);
  r.standard_error = rows.front().error + pairwise_sum(error);
  r.truncation_term = density.back() * rows.back().empirical * (rows[m - 1].level - rows[m - 2].level);
  r.inconclusive = rows.back().empirical > 0.0;
  return r;
}

Verdict classify_drift(double slope, double slope_error, const VerdictRule& rule) {
  if (!std::isfinite(slope) || !(slope_error >= 0.0)) return Verdict::Inconclusive;
  if (slope > rule.diverging_slope && slope - rule.separation_sigmas * slope_error > 0.0)
    return Verdict::Diverging;
  if (std::abs(slope) < rule.stable_slope &&
      std::abs(slope) <= std::max(rule.separation_sigmas * slope_error, rule.practical_zero))
    return Verdict::Stable;
  return Verdict::Inconclusive;
}

DivergenceVerdict divergence_scan(const EnsembleConfig& base, std::span<const std::size_t> schedule,
                                  const VerdictRule& rule) {
  require(schedule.size() >= 2, "divergence_scan: schedule needs at least two entries");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    require(schedule[i] > schedule[i - 1], "divergence_scan: schedule must increase");
  DivergenceVerdict out;
  out.schedule.assign(schedule.begin(), schedule.end());
  for (std::size_t n : schedule) {
    EnsembleConfig cfg = base;
    cfg.n_modes = n;
    cfg.resolution = 0;
    const auto report = estimate_partition(cfg);
    out.reports.push_back(report);
    out.log_estimates.push_back(report.log_estimate);
    out.log_errors.push_back(report.log_scale_error());
  }
  const std::size_t first = schedule.size() / 2;
  std::vector<double> x, y, w;
  for (std::size_t i = first; i < schedule.size(); ++i) {
    if (!std::isfinite(out.log_estimates[i])) return out;
    x.push_back(std::log(static_cast<double>(schedule[i])));
    y.push_back(out.log_estimates[i]);
    const double sigma = std::max(out.log_errors[i], 1e-12);
    w.push_back(1.0 / (sigma * sigma));
  }
  out.fitted_points = x.size();
  if (x.size() < 2) return out;
  const double sw = std::accumulate(w.begin(), w.end(), 0.0);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  out.slope = sxy / sxx;
  out.slope_error = std::sqrt(1.0 / sxx);
  out.verdict = classify_drift(out.slope, out.slope_error, rule);
  return out;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_json(const EstimatorReport& r) {
  nlohmann::ordered_json j;
  j["estimate"] = number(r.estimate);
  j["log_estimate"] = number(r.log_estimate);
  j["standard_error"] = number(r.standard_error);
  j["log_standard_error"] = number(r.log_standard_error);
  j["effective_sample_size"] = number(r.effective_sample_size);
  j["fraction_inside_cutoff"] = number(r.fraction_inside_cutoff);
  j["n_modes"] = r.n_modes;
  j["n_samples"] = r.n_samples;
  j["seed"] = r.seed;
  j["sampler"] = to_string(r.sampler);
  j["tilt_action"] = number(r.tilt_action);
  return j.dump(2);
}

std::string to_json(const EnsembleConfig& c) {
  nlohmann::ordered_json j;
  j["dim"] = c.dim;
  j["p"] = c.p;
  j["K"] = number(c.K);
  j["n_modes"] = c.n_modes;
  j["n_samples"] = c.n_samples;
  j["seed"] = c.seed;
  j["resolution"] = c.resolution;
  j["sampler"] = to_string(c.sampler);
  j["calibration"] = c.calibration;
  j["normalization"] = to_string(c.normalization);
  j["convention"] = c.convention == RadialConvention::Normalized ? "normalized" : "literal";
  j["tilt_mixture"] = c.tilt.mixture;
  j["tilt_fallback_amplitude"] = c.tilt.fallback_amplitude;
  return j.dump(2);
}

std::string scan_csv(const DivergenceVerdict& scan) {
  std::string out = "N,n_samples,log_estimate,stderr,fraction_inside_cutoff\r\n";
  for (std::size_t i = 0; i < scan.schedule.size(); ++i) {
    const auto& r = scan.reports[i];
    out += std::to_string(scan.schedule[i]) + "," + std::to_string(r.n_samples) + "," +
           csv_number(r.log_estimate) + "," + csv_number(scan.log_errors[i]) + "," +
           csv_number(r.fraction_inside_cutoff) + "\r\n";
  }
  return out;
}

}  // namespace gibbslab
