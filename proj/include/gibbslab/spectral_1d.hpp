// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gibbslab {

/// Spectral weight convention for the Brownian loop.
enum class Normalization {
  /// w_n = 1/(2 pi |n|): the Dirichlet energy is a sum of standard-normal
  /// squares, matching the Gaussian free field density exp(-1/2 |u'|^2).
  Gff,
  /// w_n = 1/|n|, the literal random series weight.
  PaperLiteral,
};

const char* to_string(Normalization n) noexcept;
Normalization normalization_from_string(const std::string& name);

enum class ProjectionKind {
  Block,  // 2^{k-1} <= |n| < 2^k
  Low,    // |n| < 2^{k+1}; complement of High(k+1)
  High,   // |n| >= 2^k
};

/// Returns true when |n| (n >= 1) survives the given projection.
bool keeps_frequency(ProjectionKind kind, int k, std::size_t n) noexcept;

/// Truncated real mean-zero loop on [0, 1].
///
/// Stored as whitened coordinates (X_n, Y_n), n = 1..N, with
/// c_n = w_n (X_n + i Y_n) / sqrt(2) and c_{-n} = conj(c_n). The zero mode is
/// structurally absent and Hermitian symmetry holds by construction.
class SpectralField1D {
 public:
  static SpectralField1D zero(std::size_t n_modes,
                              Normalization norm = Normalization::Gff);
  /// Draws X_n, Y_n iid N(0,1) from stream (seed, stream).
  static SpectralField1D sample(std::uint64_t seed, std::uint64_t stream,
                                std::size_t n_modes,
                                Normalization norm = Normalization::Gff);
  /// xi = (X_1, Y_1, X_2, Y_2, ...), length 2N.
  static SpectralField1D from_whitened(Normalization norm,
                                       std::vector<double> xi);
  /// positive[n-1] = c_n for n = 1..N.
  static SpectralField1D from_coefficients(
      Normalization norm, std::span<const std::complex<double>> positive);

  std::size_t n_modes() const noexcept { return xi_.size() / 2; }
  Normalization normalization() const noexcept { return norm_; }
  std::span<const double> whitened() const noexcept { return xi_; }

  double weight(std::size_t n) const noexcept;
  /// Coefficient c_n for any n in [-N, N]; c_0 = 0.
  std::complex<double> coeff(long n) const;
  std::vector<std::complex<double>> positive_coeffs() const;

 private:
  SpectralField1D(Normalization norm, std::vector<double> xi)
      : norm_(norm), xi_(std::move(xi)) {}

  Normalization norm_;
  std::vector<double> xi_;
};

struct GridSamples1D {
  std::vector<double> values;  // values[m] = u(m / M)
  std::size_t grid_size() const noexcept { return values.size(); }
};

SpectralField1D dyadic_project(const SpectralField1D& field,
                               ProjectionKind kind, int k);

/// Smallest admissible grid for a field with n_modes modes (M >= 4N).
std::size_t minimum_grid_size(std::size_t n_modes) noexcept;

/// Grid on which the p-th power integral of a degree-N trigonometric
/// polynomial is exact (M > pN, power of two, and at least 4N).
std::size_t exact_grid_size(std::size_t n_modes, double p) noexcept;

/// Throws ErrorKind::Resolution when M < 4N.
GridSamples1D evaluate_grid(const SpectralField1D& field, std::size_t grid_size);
/// u'(x_m) by spectral differentiation.
GridSamples1D evaluate_derivative_grid(const SpectralField1D& field,
                                       std::size_t grid_size);
/// O(NM) direct summation; reference path for tests.
GridSamples1D evaluate_grid_direct(const SpectralField1D& field,
                                   std::size_t grid_size);

/// Rectangle-rule integral M^{-1} sum |u_m|^p.
double lp_integral(const GridSamples1D& samples, double p);
double lp_norm(const GridSamples1D& samples, double p);

double l2_norm_spectral(const SpectralField1D& field);
double l2_norm_spectral_sq(const SpectralField1D& field);
double h1_seminorm_sq(const SpectralField1D& field);
double h1_seminorm(const SpectralField1D& field);

/// {n_modes, normalization, coeffs: [[n, re, im], ...]} over n = -N..N, n != 0.
std::string to_json(const SpectralField1D& field);
SpectralField1D spectral_field_from_json(const std::string& text);

}  // namespace gibbslab
