// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/tail_lab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>

#include "gibbslab/bessel_radial.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/random.hpp"

namespace gibbslab {

using std::numbers::pi;

namespace {

constexpr std::size_t kChunk = 4096;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t sum_counts(const std::vector<std::size_t>& v) {
  std::size_t s = 0;
  for (auto x : v) s += x;
  return s;
}

}  // namespace

void TailCurve::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && !(r.level > rows[i - 1].level))
      fail(ErrorKind::InvalidArgument, "TailCurve: levels must increase strictly");
    if (!(r.empirical >= 0.0 && r.empirical <= 1.0))
      fail(ErrorKind::InvalidArgument, "TailCurve: empirical probability outside [0, 1]");
    if (!(r.theoretical >= 0.0)) fail(ErrorKind::InvalidArgument, "TailCurve: negative bound");
  }
}

std::vector<std::size_t> TailCurve::violations(double sigmas) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].valid && rows[i].empirical > rows[i].theoretical + sigmas * rows[i].error)
      out.push_back(i);
  return out;
}

std::string to_csv(const TailCurve& curve) {
  std::string out = "level,empirical,err,theoretical,valid_flag\r\n";
  for (const auto& r : curve.rows)
    out += fmt(r.level) + "," + fmt(r.empirical) + "," + fmt(r.error) + "," + fmt(r.theoretical) +
           "," + (r.valid ? "1" : "0") + "\r\n";
  return out;
}

BinomialEstimate binomial(std::size_t hits, std::size_t trials) {
  require(trials > 0 && hits <= trials, "binomial: need 0 <= hits <= trials, trials > 0");
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {hits, trials, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

// ---- chi-square tail -----------------------------------------------------------

Chi2Bound chi2_tail_bound(std::size_t m, double r) {
  require(m >= 1, "chi2_tail_bound: M must be at least 1");
  require(r > 0.0, "chi2_tail_bound: R must be positive");
  return {std::exp(-r * r / 4.0), r >= 3.0 * std::sqrt(static_cast<double>(m))};
}

TailCurve chi2_tail_curve(std::size_t m, std::span<const double> levels, std::size_t samples,
                          std::uint64_t seed) {
  require(m >= 1 && samples >= 1, "chi2_tail_curve: need M >= 1 and samples >= 1");
  require(!levels.empty(), "chi2_tail_curve: empty level grid");
  const std::uint64_t key = derive_seed(seed, 0xc4125eedull + m);
  const std::size_t nl = levels.size();
  auto chunks = map_chunks<std::vector<std::size_t>>(samples, kChunk, [&](std::size_t b, std::size_t e) {
    std::vector<std::size_t> hits(nl, 0);
    for (std::size_t i = b; i < e; ++i) {
      StreamRng rng(key, i);
      double s = 0.0;
      for (std::size_t d = 0; d < m; ++d) {
        const double x = rng.normal();
        s += x * x;
      }
      for (std::size_t l = 0; l < nl; ++l)
        if (s >= levels[l] * levels[l]) ++hits[l];
    }
    return hits;
  });
  TailCurve curve;
  curve.metadata = {{"kind", "chi2"}, {"M", std::to_string(m)}, {"samples", std::to_string(samples)},
                    {"seed", std::to_string(seed)}};
  for (std::size_t l = 0; l < nl; ++l) {
    std::size_t h = 0;
    for (const auto& c : chunks) h += c[l];
    const auto est = binomial(h, samples);
    const auto bound = chi2_tail_bound(m, levels[l]);
    curve.rows.push_back({levels[l], est.probability, est.error, bound.bound, bound.valid,
                          h >= kResolvableHits});
  }
  curve.validate();
  return curve;
}

// ---- Gaussian MGF ------------------------------------------------------------------

double gaussian_mgf(double c, double m) {
  require(m >= 0.0, "gaussian_mgf: M must be nonnegative");
  if (c >= 0.5)
    fail(ErrorKind::Divergence, "gaussian_mgf: E exp(c X^2) is infinite for c >= 1/2");
  return std::pow(1.0 - 2.0 * c, -m / 2.0);
}

double gaussian_mgf_quadrature(double c) {
  if (c >= 0.5)
    fail(ErrorKind::Divergence, "gaussian_mgf_quadrature: integral diverges for c >= 1/2");
  const double a = 1.0 - 2.0 * c;
  const double extent = std::sqrt(2.0 * 45.0 / a);
  constexpr int kPanels = 96;
  const GaussLegendre gl = gauss_legendre(24, 0.0, 1.0);
  const double width = extent / kPanels;
  std::vector<double> parts;
  parts.reserve(kPanels * gl.nodes.size());
  for (int panel = 0; panel < kPanels; ++panel)
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double x = (panel + gl.nodes[q]) * width;
      parts.push_back(gl.weights[q] * width * std::exp(c * x * x - 0.5 * x * x));
    }
  return 2.0 * pairwise_sum(parts) / std::sqrt(2.0 * pi);
}

MeanEstimate mgf_monte_carlo(double c, std::size_t m, std::size_t samples, std::uint64_t seed) {
  require(samples >= 2 && m >= 1, "mgf_monte_carlo: need M >= 1 and at least two samples");
  const std::uint64_t key = derive_seed(seed, 0x36f0ull + m);
  struct Moments {
    double s1 = 0.0, s2 = 0.0;
  };
  const auto chunks = map_chunks<Moments>(samples, kChunk, [&](std::size_t b, std::size_t e) {
    std::vector<double> v(e - b), v2(e - b);
    for (std::size_t i = b; i < e; ++i) {
      StreamRng rng(key, i);
      double s = 0.0;
      for (std::size_t d = 0; d < m; ++d) {
        const double x = rng.normal();
        s += x * x;
      }
      v[i - b] = std::exp(c * s);
      v2[i - b] = v[i - b] * v[i - b];
    }
    return Moments{pairwise_sum(v), pairwise_sum(v2)};
  });
  std::vector<double> a(chunks.size()), b(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    a[i] = chunks[i].s1;
    b[i] = chunks[i].s2;
  }
  const double n = static_cast<double>(samples);
  const double mean = pairwise_sum(a) / n;
  const double var = std::max(0.0, (pairwise_sum(b) / n - mean * mean) * n / (n - 1.0));
  return {mean, std::sqrt(var / n), samples};
}

// ---- Bernstein probe -----------------------------------------------------------------

double bernstein_ratio(const SpectralField1D& u, int j, double p) {
  require(j >= 1, "bernstein_ratio: block index must be >= 1");
  const auto block = dyadic_project(u, ProjectionKind::Block, j);
  const double l2 = l2_norm_spectral(block);
  if (!(l2 > 0.0)) fail(ErrorKind::InvalidArgument, "bernstein_ratio: block content is zero");
  const auto grid = evaluate_grid(block, exact_grid_size(block.n_modes(), p));
  return lp_norm(grid, p) / (std::exp2(j * (0.5 - 1.0 / p)) * l2);
}

BernsteinProbe bernstein_probe(int j, double p, std::size_t trials, std::uint64_t seed) {
  require(j >= 1 && j <= 20, "bernstein_probe: block index must be in [1, 20]");
  require(p >= 2.0, "bernstein_probe: p must be at least 2");
  require(trials >= 1, "bernstein_probe: need at least one trial");
  const std::size_t lo = std::size_t{1} << (j - 1);
  const std::size_t n_modes = (std::size_t{1} << j) - 1;
  const std::uint64_t key = derive_seed(seed, 0xbe125ull + static_cast<std::uint64_t>(j));
  auto make = [&](std::size_t i) {
    StreamRng rng(key, i);
    std::vector<std::complex<double>> c(n_modes, 0.0);
    if (i % 2 == 0) {
      for (std::size_t n = lo; n <= n_modes; ++n) c[n - 1] = {rng.normal(), rng.normal()};
    } else {
      const double shift = rng.uniform();
      for (std::size_t n = lo; n <= n_modes; ++n) {
        const double amp = 0.5 + rng.uniform();
        c[n - 1] = std::polar(amp, -2.0 * pi * static_cast<double>(n) * shift);
      }
    }
    return SpectralField1D::from_coefficients(Normalization::Gff, c);
  };
  BernsteinProbe out;
  out.block = j;
  out.p = p;
  out.ratios.resize(trials);
  parallel_for(trials, [&](std::size_t i) { out.ratios[i] = bernstein_ratio(make(i), j, p); });
  out.argmax = static_cast<std::size_t>(
      std::max_element(out.ratios.begin(), out.ratios.end()) - out.ratios.begin());
  out.constant = out.ratios[out.argmax];
  out.maximizer = make(out.argmax);
  return out;
}

double effective_bernstein_constant(double probed, Normalization norm) {
  require(probed > 0.0, "effective_bernstein_constant: constant must be positive");
  // Block j weights satisfy |c_n|^2 <= (kappa 2^j)^{-2} (X_n^2 + Y_n^2).
  return norm == Normalization::Gff ? probed / pi : probed / 0.5;
}

// ---- dyadic schedule and high-frequency bound ------------------------------------------

namespace {

void check_schedule_args(double lambda, double r, int p) {
  require(p > 2, "dyadic schedule: p must exceed 2");
  require(lambda > 0.0, "dyadic schedule: lambda must be positive");
  if (!(r > 0.0 && r < 1.0 / p))
    fail(ErrorKind::InvalidArgument, "dyadic schedule: r must lie in (0, 1/p)");
}

/// The chi-square bound applies to block j when lambda_j 2^{j/p} / C >= 3;
/// the left side increases with j, so the first block decides.
double validity_margin(double lambda, int k, double r, int p, double c_eff) {
  return lambda * (1.0 - std::exp2(-r)) * std::exp2(static_cast<double>(k) / p) / c_eff;
}

}  // namespace

DyadicSchedule dyadic_schedule(double lambda, int k, double r, int p, double effective_constant,
                               std::size_t terms) {
  check_schedule_args(lambda, r, p);
  require(effective_constant > 0.0, "dyadic_schedule: constant must be positive");
  require(terms >= 1, "dyadic_schedule: need at least one term");
  DyadicSchedule s;
  s.lambda = lambda;
  s.k = k;
  s.r = r;
  s.p = p;
  const double lead = lambda * (1.0 - std::exp2(-r));
  for (std::size_t m = 0; m < terms; ++m) s.values.push_back(lead * std::exp2(-r * static_cast<double>(m)));
  s.tail = lambda * std::exp2(-r * static_cast<double>(terms));
  s.closed_form_sum = lambda - s.tail;
  s.valid_at_k = validity_margin(lambda, k, r, p, effective_constant) >= 3.0;
  const double kmin = p * std::log2(3.0 * effective_constant / lead);
  s.minimal_valid_k = static_cast<int>(std::ceil(kmin - 1e-12));
  while (validity_margin(lambda, s.minimal_valid_k, r, p, effective_constant) < 3.0) ++s.minimal_valid_k;
  return s;
}

HighFreqBound high_freq_tail_bound(int k, double lambda, double r, int p,
                                   double effective_constant) {
  check_schedule_args(lambda, r, p);
  require(effective_constant > 0.0, "high_freq_tail_bound: constant must be positive");
  HighFreqBound b;
  const double c = effective_constant;
  const double q = 1.0 - std::exp2(-r);
  b.exponent = lambda * lambda * q * q * std::exp2((1.0 + 2.0 / p) * k) / (4.0 * c * c);
  const double beta = 1.0 + 2.0 / p - 2.0 * r;
  b.prefactor = 1.0 / -std::expm1(-b.exponent * beta * std::log(2.0));
  b.log_bound = std::log(b.prefactor) - b.exponent;
  b.bound = std::exp(b.log_bound);
  b.valid = validity_margin(lambda, k, r, p, c) >= 3.0;
  return b;
}

BinomialEstimate high_freq_empirical(int k, double lambda, int p, std::size_t n_modes,
                                     std::size_t samples, std::uint64_t seed,
                                     Normalization norm) {
  require(k >= 0 && n_modes >= 1 && samples >= 1, "high_freq_empirical: bad arguments");
  const std::uint64_t key = derive_seed(seed, 0x41f0ull + static_cast<std::uint64_t>(k));
  const std::size_t grid = exact_grid_size(n_modes, p);
  const auto counts = map_chunks<std::size_t>(samples, 256, [&](std::size_t b, std::size_t e) {
    std::size_t hits = 0;
    for (std::size_t i = b; i < e; ++i) {
      const auto u = SpectralField1D::sample(key, i, n_modes, norm);
      const auto high = dyadic_project(u, ProjectionKind::High, k);
      if (lp_norm(evaluate_grid(high, grid), p) > lambda) ++hits;
    }
    return hits;
  });
  return binomial(sum_counts(counts), samples);
}

// ---- Fernique and 2D block tails ---------------------------------------------------------

FerniqueProbe fernique_probe(std::span<const double> norm_samples, std::span<const double> t_grid) {
  require(norm_samples.size() >= 1000, "fernique_probe: need at least 1000 samples");
  require(!t_grid.empty(), "fernique_probe: empty t grid");
  FerniqueProbe out;
  out.mean = pairwise_sum(norm_samples) / static_cast<double>(norm_samples.size());
  for (double t : t_grid) {
    require(t > 1.0, "fernique_probe: t must exceed 1");
    std::size_t hits = 0;
    for (double x : norm_samples)
      if (x >= t * out.mean) ++hits;
    const auto est = binomial(hits, norm_samples.size());
    out.t.push_back(t);
    out.empirical.push_back(est.probability);
    out.error.push_back(est.error);
    if (hits > 0) out.c_hat = std::min(out.c_hat, -std::log(est.probability) / (t * t));
  }
  return out;
}

namespace {

BlockTail2D evaluate_block_tail(int k, double lambda, std::vector<double> eps, double c_hat,
                                double block_constant) {
  require(lambda > 0.0, "block_tail_2d: lambda must be positive");
  require(c_hat > 0.0, "block_tail_2d: Fernique constant must be positive");
  require(block_constant > 0.0, "block_tail_2d: block constant must be positive");
  BlockTail2D b;
  b.k = k;
  b.lambda = lambda;
  const double c_prime = c_hat / (block_constant * block_constant);
  b.valid = true;
  for (std::size_t m = 0; m < eps.size(); ++m) {
    require(eps[m] > 0.0, "block_tail_2d: schedule entries must be positive");
    const double j = static_cast<double>(k) + static_cast<double>(m);
    const double t = eps[m] * lambda * std::exp2(j / 2.0) / block_constant;
    const bool ok = t > 1.0;
    const double term = ok ? std::exp(-c_prime * eps[m] * eps[m] * lambda * lambda * std::exp2(j)) : 1.0;
    b.term_valid.push_back(ok);
    b.terms.push_back(term);
    b.valid = b.valid && ok;
  }
  b.sum = pairwise_sum(b.terms);
  b.epsilon = std::move(eps);
  b.closing_bound = b.sum;
  return b;
}

}  // namespace

BlockTail2D block_tail_2d(int k, double lambda, double s, double c_hat, double block_constant,
                          std::size_t terms) {
  if (!(s > 0.0 && s < 0.5)) fail(ErrorKind::InvalidArgument, "block_tail_2d: s must lie in (0, 1/2)");
  require(terms >= 1, "block_tail_2d: need at least one term");
  std::vector<double> eps(terms);
  const double lead = 1.0 - std::exp2(-s);
  for (std::size_t m = 0; m < terms; ++m) eps[m] = lead * std::exp2(-s * static_cast<double>(m));
  BlockTail2D b = evaluate_block_tail(k, lambda, std::move(eps), c_hat, block_constant);
  b.s = s;
  // Geometric summation: exponents b_k 2^{(1-2s)(j-k)} with b_k = c'' lambda^2 2^k.
  const double c_prime = c_hat / (block_constant * block_constant);
  b.c_double_prime = c_prime * lead * lead;
  const double bk = b.c_double_prime * lambda * lambda * std::exp2(k);
  b.closing_prefactor = 1.0 / -std::expm1(-bk * (1.0 - 2.0 * s) * std::log(2.0));
  b.closing_bound = b.closing_prefactor * std::exp(-bk);
  return b;
}

BlockTail2D block_tail_2d(int k, double lambda, std::span<const double> epsilon, double c_hat,
                          double block_constant) {
  require(!epsilon.empty(), "block_tail_2d: empty schedule");
  const double total = pairwise_sum(epsilon);
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorKind::InvalidArgument, "block_tail_2d: schedule must sum to 1");
  return evaluate_block_tail(k, lambda, std::vector<double>(epsilon.begin(), epsilon.end()), c_hat,
                             block_constant);
}

BinomialEstimate block_tail_empirical_2d(int k, double lambda, std::size_t n_modes,
                                         std::size_t samples, std::uint64_t seed) {
  require(k >= 0 && n_modes >= 1 && samples >= 1, "block_tail_empirical_2d: bad arguments");
  const auto table = bessel_zeros(n_modes);
  const RadialQuadrature quad(table, n_modes, radial_node_count(*table, n_modes, 4.0));
  const std::uint64_t key = derive_seed(seed, 0x2db7ull + static_cast<std::uint64_t>(k));
  const auto counts = map_chunks<std::size_t>(samples, 256, [&](std::size_t b, std::size_t e) {
    std::size_t hits = 0;
    for (std::size_t i = b; i < e; ++i) {
      const auto v = RadialField2D::sample(key, i, n_modes, table);
      if (radial_lp_norm(dyadic_project_radial(v, ProjectionKind::High, k), 4.0, quad) >= lambda) ++hits;
    }
    return hits;
  });
  return binomial(sum_counts(counts), samples);
}

// ---- exponent fit -------------------------------------------------------------------

TailExponentFit fit_tail_exponent(const TailCurve& curve, double p) {
  require(p > 2.0, "fit_tail_exponent: p must exceed 2");
  std::vector<double> xs, ys;
  for (const auto& r : curve.rows)
    if (r.resolvable && r.level > 0.0 && r.empirical > 0.0 && r.empirical < 1.0) {
      xs.push_back(std::log(r.level));
      ys.push_back(std::log(-std::log(r.empirical)));
    }
  TailExponentFit fit;
  fit.points = xs.size();
  fit.reference_p = p;
  fit.reference_dyadic = 4.0 * p / (p - 2.0);
  if (xs.size() < 2) {
    fit.exponent = std::numeric_limits<double>::quiet_NaN();
    fit.error = std::numeric_limits<double>::infinity();
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.exponent = sxy / sxx;
  if (xs.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - my - fit.exponent * (xs[i] - mx);
      rss += e * e;
    }
    fit.error = std::sqrt(rss / (n - 2.0) / sxx);
  } else {
    fit.error = std::numeric_limits<double>::infinity();
  }
  return fit;
}

}  // namespace gibbslab
