// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/spectral_1d.hpp"

namespace gibbslab {

/// J_0 and J_1 for x >= 0: power series below 8, Miller backward recurrence
/// up to 25, Hankel asymptotics beyond.
double bessel_j0(double x);
double bessel_j1(double x);

/// Positive zeros of J_0 with J_1 evaluated at each zero.
struct BesselTable {
  std::vector<double> zeros;
  std::vector<double> j1_at_zeros;
  std::size_t count() const noexcept { return zeros.size(); }
};

/// First `count` zeros of J_0, McMahon initial guess refined by Newton with
/// a bisection fallback. Throws ErrorKind::Numerical if a zero cannot be
/// bracketed.
std::shared_ptr<const BesselTable> bessel_zeros(std::size_t count);

/// CSV rows "n,z_n,J1(z_n)" with 15 significant digits.
std::string bessel_table_csv(const BesselTable& table);

/// Basis convention of sampled radial fields.
enum class RadialConvention {
  /// a_n = g_n / z_n on the L^2(D_1)-normalized modes.
  Normalized,
  /// Prefactor 1/sqrt(pi) on J_0(z_n r) without the |J_1(z_n)| factor.
  PaperLiteral,
};

/// Truncated radial field v = sum_n a_n e_n on the unit disc with
/// e_n(r) = J_0(z_n r) / (sqrt(pi) |J_1(z_n)|).
///
/// The energy coordinates xi_n = z_n a_n are stored, so that
/// int |grad v|^2 = sum xi_n^2 holds without rounding from the division.
class RadialField2D {
 public:
  static RadialField2D zero(std::shared_ptr<const BesselTable> table,
                            std::size_t n_modes);
  static RadialField2D sample(std::uint64_t seed, std::uint64_t stream,
                              std::size_t n_modes,
                              std::shared_ptr<const BesselTable> table,
                              RadialConvention convention = RadialConvention::Normalized);
  static RadialField2D from_coefficients(std::shared_ptr<const BesselTable> table,
                                         std::span<const double> coeffs);
  static RadialField2D from_energy_coordinates(
      std::shared_ptr<const BesselTable> table, std::vector<double> xi);

  std::size_t n_modes() const noexcept { return xi_.size(); }
  const BesselTable& table() const noexcept { return *table_; }
  std::shared_ptr<const BesselTable> table_ptr() const noexcept { return table_; }
  std::span<const double> energy_coordinates() const noexcept { return xi_; }
  /// Standard normals the field was drawn from; empty for constructed fields.
  std::span<const double> gaussians() const noexcept { return gaussians_; }
  double coeff(std::size_t n) const;  // a_n, n = 1..N
  std::vector<double> coeffs() const;

 private:
  RadialField2D(std::shared_ptr<const BesselTable> table, std::vector<double> xi,
                std::vector<double> gaussians);

  std::shared_ptr<const BesselTable> table_;
  std::vector<double> xi_;
  std::vector<double> gaussians_;
};

/// Gauss-Legendre nodes on [0, 1] with the mode matrix basis[q * N + n-1] =
/// e_n(r_q) (and optionally e_n'(r_q)).
class RadialQuadrature {
 public:
  /// Throws ErrorKind::Resolution when nodes < max(64, 2 z_N / pi).
  RadialQuadrature(std::shared_ptr<const BesselTable> table, std::size_t n_modes,
                   std::size_t nodes, bool with_derivative = false);

  std::size_t n_modes() const noexcept { return n_modes_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double basis(std::size_t q, std::size_t n) const noexcept {
    return basis_[q * n_modes_ + (n - 1)];
  }
  const double* basis_row(std::size_t q) const noexcept { return basis_.data() + q * n_modes_; }
  const double* dbasis_row(std::size_t q) const noexcept { return dbasis_.data() + q * n_modes_; }
  bool has_derivative() const noexcept { return !dbasis_.empty(); }
  double dbasis(std::size_t q, std::size_t n) const noexcept {
    return dbasis_[q * n_modes_ + (n - 1)];
  }

  /// 2 pi sum_q w_q f(r_q) r_q.
  double integrate(std::span<const double> values_at_nodes) const;

 private:
  std::size_t n_modes_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> basis_;
  std::vector<double> dbasis_;
};

/// Minimum node count max(64, ceil(2 z_N / pi)).
std::size_t minimum_radial_nodes(const BesselTable& table, std::size_t n_modes);
/// Node count resolving |v|^p for an N-mode field.
std::size_t radial_node_count(const BesselTable& table, std::size_t n_modes,
                              double p);

double radial_mode(const BesselTable& table, std::size_t n, double r);

std::vector<double> evaluate_radial(const RadialField2D& field,
                                    const RadialQuadrature& quad);
std::vector<double> evaluate_radial_derivative(const RadialField2D& field,
                                               const RadialQuadrature& quad);

double radial_lp_integral(const RadialField2D& field, double p,
                          const RadialQuadrature& quad);
double radial_lp_norm(const RadialField2D& field, double p,
                      const RadialQuadrature& quad);
/// Spectral L^2 norm sqrt(sum a_n^2).
double radial_l2_norm_spectral(const RadialField2D& field);
double grad_l2_spectral_sq(const RadialField2D& field);
double grad_l2_spectral(const RadialField2D& field);

RadialField2D dyadic_project_radial(const RadialField2D& field,
                                    ProjectionKind kind, int k);

struct BlockNormEstimate {
  int block = 0;
  std::size_t n_samples = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  /// mean * 2^{j/2}, the constant in E||v_j||_{L^4} <= C 2^{-j/2}.
  double scaled_constant = 0.0;
  std::vector<double> norms;
};

/// Monte Carlo estimate of E ||v_j||_{L^4(D_1)} for the dyadic index block j.
BlockNormEstimate block_l4_expectation(int j, std::size_t n_samples,
                                       std::uint64_t seed);

}  // namespace gibbslab
