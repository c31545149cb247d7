// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/bessel_radial.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gibbslab/error.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/random.hpp"

namespace gibbslab {

using std::numbers::pi;

namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;

double series_j(int order, double x) {
  const double h = 0.5 * x;
  const double h2 = h * h;
  double term = order == 0 ? 1.0 : h;
  double sum = term;
  for (int j = 1; j < 200; ++j) {
    term *= -h2 / (static_cast<double>(j) * (j + order));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && std::abs(term) < 1e-18) break;
  }
  return sum;
}

// Miller's algorithm normalized by J_0 + 2 sum J_{2k} = 1.
void miller_j01(double x, double& j0, double& j1) {
  int start = static_cast<int>(x + 40.0 + 8.0 * std::cbrt(x));
  if (start % 2 == 1) ++start;
  double next = 0.0;   // J_{k+1}
  double curr = 1e-300; // J_k
  double norm = 0.0;
  double out0 = 0.0, out1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = 2.0 * k / x * curr - next;  // J_{k-1}
    next = curr;
    curr = prev;
    if (std::abs(curr) > 1e250) {
      curr *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      out1 *= 1e-250;
    }
    // curr is now J_{k-1}
    if (k - 1 == 1) out1 = curr;
    if (k - 1 > 0 && (k - 1) % 2 == 0) norm += 2.0 * curr;
  }
  out0 = curr;
  norm += out0;
  j0 = out0 / norm;
  j1 = out1 / norm;
}

// Hankel expansion: J_nu(x) = sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)).
void hankel_pq(int order, double x, double& p, double& q) {
  const double mu = 4.0 * order * order;
  const double inv8x = 1.0 / (8.0 * x);
  p = 1.0;
  q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) * inv8x / k;
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // term = a_k(nu) / x^k with a_k = prod (mu - (2j-1)^2) / (k! 8^k)
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (last < 1e-18) break;
  }
}

double asymptotic_j(int order, double x) {
  double p, q;
  hankel_pq(order, x, p, q);
  const double c = std::cos(x);
  const double s = std::sin(x);
  double cos_chi, sin_chi;
  if (order == 0) {  // chi = x - pi/4
    cos_chi = (c + s) / std::numbers::sqrt2;
    sin_chi = (s - c) / std::numbers::sqrt2;
  } else {  // chi = x - 3 pi/4
    cos_chi = (s - c) / std::numbers::sqrt2;
    sin_chi = -(s + c) / std::numbers::sqrt2;
  }
  return std::sqrt(2.0 / (pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

double bessel_j0(double x) {
  require(x >= 0.0, "bessel_j0: x must be nonnegative");
  if (x <= kSeriesLimit) return series_j(0, x);
  if (x < kAsymptoticLimit) {
    double j0, j1;
    miller_j01(x, j0, j1);
    return j0;
  }
  return asymptotic_j(0, x);
}

double bessel_j1(double x) {
  require(x >= 0.0, "bessel_j1: x must be nonnegative");
  if (x <= kSeriesLimit) return series_j(1, x);
  if (x < kAsymptoticLimit) {
    double j0, j1;
    miller_j01(x, j0, j1);
    return j1;
  }
  return asymptotic_j(1, x);
}

std::shared_ptr<const BesselTable> bessel_zeros(std::size_t count) {
  require(count >= 1, "bessel_zeros: count must be >= 1");
  auto table = std::make_shared<BesselTable>();
  table->zeros.reserve(count);
  table->j1_at_zeros.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    const double beta = (static_cast<double>(n) - 0.25) * pi;
    const double b8 = 8.0 * beta;
    double z = beta + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8) +
               120928.0 / (15.0 * std::pow(b8, 5));
    for (int iter = 0; iter < 8; ++iter) {
      const double step = bessel_j0(z) / bessel_j1(z);
      z += step;
      if (std::abs(step) < 1e-15 * z) break;
    }
    if (!(std::abs(bessel_j0(z)) < 1e-13) || std::abs(z - beta) > 0.5) {
      double lo = beta - 0.5, hi = beta + 0.5;
      double flo = bessel_j0(lo);
      if (flo * bessel_j0(hi) > 0.0) {
        fail(ErrorKind::Numerical,
             "bessel_zeros: could not bracket zero " + std::to_string(n) +
                 " near " + std::to_string(beta) + " (J0 evaluation suspect)");
      }
      for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j0(mid);
        if (fm * flo > 0.0) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      z = 0.5 * (lo + hi);
    }
    table->zeros.push_back(z);
    table->j1_at_zeros.push_back(bessel_j1(z));
  }
  return table;
}

std::string bessel_table_csv(const BesselTable& table) {
  std::ostringstream out;
  out << "n,z_n,J1_z_n\r\n";
  char line[128];
  for (std::size_t i = 0; i < table.count(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.15g,%.15g\r\n", i + 1, table.zeros[i],
                  table.j1_at_zeros[i]);
    out << line;
  }
  return out.str();
}

RadialField2D::RadialField2D(std::shared_ptr<const BesselTable> table,
                             std::vector<double> xi, std::vector<double> gaussians)
    : table_(std::move(table)), xi_(std::move(xi)), gaussians_(std::move(gaussians)) {
  require(table_ != nullptr, "radial field: missing Bessel table");
  require(!xi_.empty(), "radial field: n_modes must be >= 1");
  require(table_->count() >= xi_.size(), "radial field: Bessel table too short");
  for (double x : xi_) require(std::isfinite(x), "radial field: non-finite coefficient");
}

RadialField2D RadialField2D::zero(std::shared_ptr<const BesselTable> table,
                                  std::size_t n_modes) {
  return RadialField2D(std::move(table), std::vector<double>(n_modes, 0.0), {});
}

RadialField2D RadialField2D::sample(std::uint64_t seed, std::uint64_t stream,
                                    std::size_t n_modes,
                                    std::shared_ptr<const BesselTable> table,
                                    RadialConvention convention) {
  require(table != nullptr && table->count() >= n_modes,
          "sample_radial: Bessel table shorter than n_modes");
  StreamRng rng(seed, stream);
  std::vector<double> g(n_modes);
  for (double& x : g) x = rng.normal();
  std::vector<double> xi = g;
  if (convention == RadialConvention::PaperLiteral) {
    for (std::size_t i = 0; i < n_modes; ++i) xi[i] *= std::abs(table->j1_at_zeros[i]);
  }
  return RadialField2D(std::move(table), std::move(xi), std::move(g));
}

RadialField2D RadialField2D::from_coefficients(std::shared_ptr<const BesselTable> table,
                                               std::span<const double> coeffs) {
  require(table != nullptr && table->count() >= coeffs.size(),
          "radial field: Bessel table too short");
  std::vector<double> xi(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) xi[i] = table->zeros[i] * coeffs[i];
  return RadialField2D(std::move(table), std::move(xi), {});
}

RadialField2D RadialField2D::from_energy_coordinates(
    std::shared_ptr<const BesselTable> table, std::vector<double> xi) {
  return RadialField2D(std::move(table), std::move(xi), {});
}

double RadialField2D::coeff(std::size_t n) const {
  require(n >= 1 && n <= n_modes(), "radial field: mode index out of range");
  return xi_[n - 1] / table_->zeros[n - 1];
}

std::vector<double> RadialField2D::coeffs() const {
  std::vector<double> out(n_modes());
  for (std::size_t n = 1; n <= n_modes(); ++n) out[n - 1] = coeff(n);
  return out;
}

double radial_mode(const BesselTable& table, std::size_t n, double r) {
  const double z = table.zeros[n - 1];
  return bessel_j0(z * r) / (std::sqrt(pi) * std::abs(table.j1_at_zeros[n - 1]));
}

std::size_t minimum_radial_nodes(const BesselTable& table, std::size_t n_modes) {
  const double z = table.zeros[n_modes - 1];
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(2.0 * z / pi)));
}

std::size_t radial_node_count(const BesselTable& table, std::size_t n_modes, double p) {
  const double z = table.zeros[n_modes - 1];
  const auto resolved = static_cast<std::size_t>(std::ceil(0.3 * std::max(p, 2.0) * z)) + 40;
  return std::max(minimum_radial_nodes(table, n_modes), resolved);
}

RadialQuadrature::RadialQuadrature(std::shared_ptr<const BesselTable> table,
                                   std::size_t n_modes, std::size_t nodes,
                                   bool with_derivative)
    : n_modes_(n_modes) {
  require(table != nullptr && n_modes >= 1 && table->count() >= n_modes,
          "radial quadrature: Bessel table shorter than n_modes");
  const std::size_t need = minimum_radial_nodes(*table, n_modes);
  if (nodes < need) {
    fail(ErrorKind::Resolution,
         "radial quadrature: " + std::to_string(nodes) + " nodes undersample " +
             std::to_string(n_modes) + " modes (need " + std::to_string(need) + ")");
  }
  auto rule = gauss_legendre(nodes, 0.0, 1.0);
  nodes_ = std::move(rule.nodes);
  weights_ = std::move(rule.weights);
  basis_.resize(nodes * n_modes);
  if (with_derivative) dbasis_.resize(nodes * n_modes);
  const BesselTable& t = *table;
  parallel_for(nodes, [&](std::size_t q) {
    const double r = nodes_[q];
    for (std::size_t n = 1; n <= n_modes; ++n) {
      const double z = t.zeros[n - 1];
      const double scale = 1.0 / (std::sqrt(pi) * std::abs(t.j1_at_zeros[n - 1]));
      basis_[q * n_modes + n - 1] = scale * bessel_j0(z * r);
      if (with_derivative) dbasis_[q * n_modes + n - 1] = -scale * z * bessel_j1(z * r);
    }
  });
}

double RadialQuadrature::integrate(std::span<const double> values) const {
  require(values.size() == nodes_.size(), "radial quadrature: value count mismatch");
  std::vector<double> terms(values.size());
  for (std::size_t q = 0; q < values.size(); ++q)
    terms[q] = weights_[q] * values[q] * nodes_[q];
  return 2.0 * pi * pairwise_sum(terms);
}

namespace {

std::vector<double> synthesize(const RadialField2D& field, const RadialQuadrature& quad,
                               bool derivative) {
  require(quad.n_modes() >= field.n_modes(),
          "evaluate_radial: quadrature built for fewer modes than the field");
  require(!derivative || quad.has_derivative(),
          "evaluate_radial_derivative: quadrature lacks derivative basis");
  const auto a = field.coeffs();
  const std::size_t m = a.size();
  std::vector<double> out(quad.node_count(), 0.0);
  for (std::size_t q = 0; q < quad.node_count(); ++q) {
    const double* row = derivative ? quad.dbasis_row(q) : quad.basis_row(q);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t n = 0;
    for (; n + 4 <= m; n += 4) {
      s0 += a[n] * row[n];
      s1 += a[n + 1] * row[n + 1];
      s2 += a[n + 2] * row[n + 2];
      s3 += a[n + 3] * row[n + 3];
    }
    for (; n < m; ++n) s0 += a[n] * row[n];
    out[q] = (s0 + s1) + (s2 + s3);
  }
  return out;
}

}  // namespace

std::vector<double> evaluate_radial(const RadialField2D& field,
                                    const RadialQuadrature& quad) {
  return synthesize(field, quad, false);
}

std::vector<double> evaluate_radial_derivative(const RadialField2D& field,
                                               const RadialQuadrature& quad) {
  return synthesize(field, quad, true);
}

double radial_lp_integral(const RadialField2D& field, double p,
                          const RadialQuadrature& quad) {
  require(p >= 1.0, "radial_lp_norm: p must be >= 1");
  auto v = evaluate_radial(field, quad);
  const bool even = p == std::floor(p) && static_cast<long>(p) % 2 == 0 && p <= 16;
  for (double& x : v) {
    if (even) {
      const double x2 = x * x;
      double r = 1.0;
      for (long e = 0; e < static_cast<long>(p) / 2; ++e) r *= x2;
      x = r;
    } else {
      x = std::pow(std::abs(x), p);
    }
  }
  return quad.integrate(v);
}

double radial_lp_norm(const RadialField2D& field, double p, const RadialQuadrature& quad) {
  return std::pow(radial_lp_integral(field, p, quad), 1.0 / p);
}

double radial_l2_norm_spectral(const RadialField2D& field) {
  double s = 0.0;
  for (std::size_t n = 1; n <= field.n_modes(); ++n) s += field.coeff(n) * field.coeff(n);
  return std::sqrt(s);
}

double grad_l2_spectral_sq(const RadialField2D& field) {
  double s = 0.0;
  for (double x : field.energy_coordinates()) s += x * x;
  return s;
}

double grad_l2_spectral(const RadialField2D& field) {
  return std::sqrt(grad_l2_spectral_sq(field));
}

RadialField2D dyadic_project_radial(const RadialField2D& field, ProjectionKind kind,
                                    int k) {
  std::vector<double> xi(field.energy_coordinates().begin(),
                         field.energy_coordinates().end());
  for (std::size_t n = 1; n <= xi.size(); ++n)
    if (!keeps_frequency(kind, k, n)) xi[n - 1] = 0.0;
  return RadialField2D::from_energy_coordinates(field.table_ptr(), std::move(xi));
}

BlockNormEstimate block_l4_expectation(int j, std::size_t n_samples, std::uint64_t seed) {
  require(j >= 1 && j <= 16, "block_l4_expectation: block index must be in [1, 16]");
  require(n_samples >= 2, "block_l4_expectation: need at least two samples");
  const std::size_t n_modes = (std::size_t{1} << j) - 1;
  auto table = bessel_zeros(n_modes);
  RadialQuadrature quad(table, n_modes, radial_node_count(*table, n_modes, 4.0));
  BlockNormEstimate est;
  est.block = j;
  est.n_samples = n_samples;
  est.norms.resize(n_samples);
  const std::uint64_t block_seed = derive_seed(seed, static_cast<std::uint64_t>(j));
  parallel_for(n_samples, [&](std::size_t i) {
    auto v = RadialField2D::sample(block_seed, i, n_modes, table);
    est.norms[i] = radial_lp_norm(dyadic_project_radial(v, ProjectionKind::Block, j), 4.0, quad);
  });
  const double mean = pairwise_sum(est.norms) / static_cast<double>(n_samples);
  std::vector<double> dev(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) dev[i] = (est.norms[i] - mean) * (est.norms[i] - mean);
  const double var = pairwise_sum(dev) / static_cast<double>(n_samples - 1);
  est.mean = mean;
  est.standard_error = std::sqrt(var / static_cast<double>(n_samples));
  est.scaled_constant = mean * std::sqrt(std::ldexp(1.0, j));
  return est;
}

}  // namespace gibbslab
