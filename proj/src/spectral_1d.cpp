// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/spectral_1d.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "fft.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/random.hpp"

namespace gibbslab {

using std::numbers::pi;

const char* to_string(Normalization n) noexcept {
  return n == Normalization::Gff ? "GFF" : "PaperLiteral";
}

Normalization normalization_from_string(const std::string& name) {
  if (name == "GFF" || name == "gff") return Normalization::Gff;
  if (name == "PaperLiteral" || name == "literal") return Normalization::PaperLiteral;
  fail(ErrorKind::InvalidArgument, "unknown normalization '" + name + "'");
}

bool keeps_frequency(ProjectionKind kind, int k, std::size_t n) noexcept {
  if (k < 0) return kind == ProjectionKind::High;
  const double lo = std::ldexp(1.0, k - 1);
  const double hi = std::ldexp(1.0, k);
  const auto f = static_cast<double>(n);
  switch (kind) {
    case ProjectionKind::Block: return f >= lo && f < hi;
    case ProjectionKind::Low: return f < 2.0 * hi;
    case ProjectionKind::High: return f >= hi;
  }
  return false;
}

SpectralField1D SpectralField1D::zero(std::size_t n_modes, Normalization norm) {
  require(n_modes >= 1, "zero_field: n_modes must be >= 1");
  return SpectralField1D(norm, std::vector<double>(2 * n_modes, 0.0));
}

SpectralField1D SpectralField1D::sample(std::uint64_t seed, std::uint64_t stream,
                                        std::size_t n_modes, Normalization norm) {
  require(n_modes >= 1, "sample_loop: n_modes must be >= 1 (use zero_field)");
  StreamRng rng(seed, stream);
  std::vector<double> xi(2 * n_modes);
  for (double& x : xi) x = rng.normal();
  return SpectralField1D(norm, std::move(xi));
}

SpectralField1D SpectralField1D::from_whitened(Normalization norm,
                                               std::vector<double> xi) {
  require(!xi.empty() && xi.size() % 2 == 0,
          "from_whitened: need 2N whitened coordinates");
  for (double x : xi) require(std::isfinite(x), "from_whitened: non-finite value");
  return SpectralField1D(norm, std::move(xi));
}

SpectralField1D SpectralField1D::from_coefficients(
    Normalization norm, std::span<const std::complex<double>> positive) {
  require(!positive.empty(), "from_coefficients: need at least one mode");
  SpectralField1D field(norm, std::vector<double>(2 * positive.size()));
  for (std::size_t n = 1; n <= positive.size(); ++n) {
    const double scale = std::sqrt(2.0) / field.weight(n);
    field.xi_[2 * (n - 1)] = scale * positive[n - 1].real();
    field.xi_[2 * (n - 1) + 1] = scale * positive[n - 1].imag();
  }
  for (double x : field.xi_) require(std::isfinite(x), "from_coefficients: non-finite value");
  return field;
}

double SpectralField1D::weight(std::size_t n) const noexcept {
  const auto f = static_cast<double>(n);
  return norm_ == Normalization::Gff ? 1.0 / (2.0 * pi * f) : 1.0 / f;
}

std::complex<double> SpectralField1D::coeff(long n) const {
  const auto a = static_cast<std::size_t>(n < 0 ? -n : n);
  if (a == 0 || a > n_modes()) return {0.0, 0.0};
  const double s = weight(a) / std::sqrt(2.0);
  const std::complex<double> c(s * xi_[2 * (a - 1)], s * xi_[2 * (a - 1) + 1]);
  return n < 0 ? std::conj(c) : c;
}

std::vector<std::complex<double>> SpectralField1D::positive_coeffs() const {
  std::vector<std::complex<double>> out(n_modes());
  for (std::size_t n = 1; n <= n_modes(); ++n) out[n - 1] = coeff(static_cast<long>(n));
  return out;
}

SpectralField1D dyadic_project(const SpectralField1D& field, ProjectionKind kind,
                               int k) {
  std::vector<double> xi(field.whitened().begin(), field.whitened().end());
  for (std::size_t n = 1; n <= field.n_modes(); ++n) {
    if (!keeps_frequency(kind, k, n)) {
      xi[2 * (n - 1)] = 0.0;
      xi[2 * (n - 1) + 1] = 0.0;
    }
  }
  return SpectralField1D::from_whitened(field.normalization(), std::move(xi));
}

std::size_t minimum_grid_size(std::size_t n_modes) noexcept { return 4 * n_modes; }

std::size_t exact_grid_size(std::size_t n_modes, double p) noexcept {
  const auto need = static_cast<std::size_t>(std::floor(p * static_cast<double>(n_modes))) + 1;
  std::size_t m = 4;
  while (m < need || m < 4 * n_modes) m *= 2;
  return m;
}

namespace {

void check_grid(const SpectralField1D& field, std::size_t grid_size) {
  if (grid_size < minimum_grid_size(field.n_modes())) {
    fail(ErrorKind::Resolution,
         "evaluate_grid: grid of " + std::to_string(grid_size) +
             " points aliases a field with " + std::to_string(field.n_modes()) +
             " modes (need M >= 4N)");
  }
}

GridSamples1D synthesize(const SpectralField1D& field, std::size_t grid_size,
                         bool derivative) {
  check_grid(field, grid_size);
  std::vector<std::complex<double>> half(grid_size / 2 + 1);
  for (std::size_t n = 1; n <= field.n_modes(); ++n) {
    std::complex<double> c = field.coeff(static_cast<long>(n));
    if (derivative) c *= std::complex<double>(0.0, 2.0 * pi * static_cast<double>(n));
    half[n] = c;
  }
  GridSamples1D out;
  out.values.resize(grid_size);
  detail::inverse_real_dft(half, out.values);
  return out;
}

}  // namespace

GridSamples1D evaluate_grid(const SpectralField1D& field, std::size_t grid_size) {
  return synthesize(field, grid_size, false);
}

GridSamples1D evaluate_derivative_grid(const SpectralField1D& field,
                                       std::size_t grid_size) {
  return synthesize(field, grid_size, true);
}

GridSamples1D evaluate_grid_direct(const SpectralField1D& field,
                                   std::size_t grid_size) {
  check_grid(field, grid_size);
  GridSamples1D out;
  out.values.assign(grid_size, 0.0);
  const long n_modes = static_cast<long>(field.n_modes());
  for (std::size_t m = 0; m < grid_size; ++m) {
    const double x = static_cast<double>(m) / static_cast<double>(grid_size);
    std::complex<double> sum = 0.0;
    for (long n = -n_modes; n <= n_modes; ++n) {
      if (n == 0) continue;
      sum += field.coeff(n) * std::polar(1.0, 2.0 * pi * static_cast<double>(n) * x);
    }
    out.values[m] = sum.real();
  }
  return out;
}

double lp_integral(const GridSamples1D& samples, double p) {
  require(p >= 1.0, "lp_norm: p must be >= 1");
  std::vector<double> powers(samples.values.size());
  const bool even_int = p == std::floor(p) && static_cast<long>(p) % 2 == 0;
  for (std::size_t m = 0; m < powers.size(); ++m) {
    const double v = samples.values[m];
    if (even_int) {
      const double v2 = v * v;
      double acc = 1.0;
      for (long j = 0; j < static_cast<long>(p) / 2; ++j) acc *= v2;
      powers[m] = acc;
    } else {
      powers[m] = std::pow(std::abs(v), p);
    }
  }
  return pairwise_sum(powers) / static_cast<double>(powers.size());
}

double lp_norm(const GridSamples1D& samples, double p) {
  return std::pow(lp_integral(samples, p), 1.0 / p);
}

double l2_norm_spectral_sq(const SpectralField1D& field) {
  // sum over +-n of |c_n|^2 = sum_n w_n^2 (X_n^2 + Y_n^2)
  double s = 0.0;
  const auto xi = field.whitened();
  for (std::size_t n = 1; n <= field.n_modes(); ++n) {
    const double w = field.weight(n);
    s += w * w * (xi[2 * (n - 1)] * xi[2 * (n - 1)] +
                  xi[2 * (n - 1) + 1] * xi[2 * (n - 1) + 1]);
  }
  return s;
}

double l2_norm_spectral(const SpectralField1D& field) {
  return std::sqrt(l2_norm_spectral_sq(field));
}

double h1_seminorm_sq(const SpectralField1D& field) {
  const auto xi = field.whitened();
  double s = 0.0;
  if (field.normalization() == Normalization::Gff) {
    for (double x : xi) s += x * x;
    return s;
  }
  for (std::size_t n = 1; n <= field.n_modes(); ++n) {
    const double k = 2.0 * pi * static_cast<double>(n);
    s += 2.0 * k * k * std::norm(field.coeff(static_cast<long>(n)));
  }
  return s;
}

double h1_seminorm(const SpectralField1D& field) {
  return std::sqrt(h1_seminorm_sq(field));
}

std::string to_json(const SpectralField1D& field) {
  nlohmann::json coeffs = nlohmann::json::array();
  const long n_modes = static_cast<long>(field.n_modes());
  for (long n = -n_modes; n <= n_modes; ++n) {
    if (n == 0) continue;
    const auto c = field.coeff(n);
    coeffs.push_back({n, c.real(), c.imag()});
  }
  nlohmann::json j = {{"n_modes", field.n_modes()},
                      {"normalization", to_string(field.normalization())},
                      {"coeffs", coeffs}};
  return j.dump();
}

SpectralField1D spectral_field_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("field JSON: ") + e.what());
  }
  const auto n_modes = j.at("n_modes").get<std::size_t>();
  const auto norm = normalization_from_string(j.at("normalization").get<std::string>());
  std::vector<std::complex<double>> positive(n_modes);
  std::vector<bool> seen(n_modes, false);
  for (const auto& entry : j.at("coeffs")) {
    const long n = entry.at(0).get<long>();
    const std::complex<double> c(entry.at(1).get<double>(), entry.at(2).get<double>());
    require(n != 0, "field JSON: zero mode present");
    const auto a = static_cast<std::size_t>(n < 0 ? -n : n);
    require(a <= n_modes, "field JSON: frequency beyond n_modes");
    const std::complex<double> positive_c = n > 0 ? c : std::conj(c);
    if (seen[a - 1]) {
      require(std::abs(positive[a - 1] - positive_c) <= 1e-12 * (1.0 + std::abs(positive_c)),
              "field JSON: coefficients violate Hermitian symmetry");
    } else {
      positive[a - 1] = positive_c;
      seen[a - 1] = true;
    }
  }
  return SpectralField1D::from_coefficients(norm, positive);
}

}  // namespace gibbslab
