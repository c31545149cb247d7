// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/spectral_1d.hpp"

namespace gibbslab {

/// Minimum exceedance count for an empirical tail to count as resolved.
inline constexpr std::size_t kResolvableHits = 10;

struct TailRow {
  double level = 0.0;
  double empirical = 0.0;
  double error = 0.0;  // binomial standard error
  double theoretical = 0.0;
  bool valid = false;       // bound's hypotheses hold at this level
  bool resolvable = false;  // at least kResolvableHits exceedances
};

struct TailCurve {
  std::vector<TailRow> rows;
  std::map<std::string, std::string> metadata;

  /// Throws InvalidArgument unless levels increase strictly, empirical lies in
  /// [0, 1] and theoretical values are nonnegative.
  void validate() const;
  /// Rows with valid bound and empirical > theoretical + sigmas * error.
  std::vector<std::size_t> violations(double sigmas = 3.0) const;
};

/// CSV with header level,empirical,err,theoretical,valid_flag (CRLF).
std::string to_csv(const TailCurve& curve);

struct BinomialEstimate {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double probability = 0.0;
  double error = 0.0;
};
BinomialEstimate binomial(std::size_t hits, std::size_t trials);

// ---- chi-square tail ---------------------------------------------------------

struct Chi2Bound {
  double bound;
  bool valid;  // R >= 3 sqrt(M)
};
Chi2Bound chi2_tail_bound(std::size_t m, double r);

/// Empirical P(sum_{i<=M} X_i^2 >= R^2) for every R in levels from one sample set.
TailCurve chi2_tail_curve(std::size_t m, std::span<const double> levels,
                          std::size_t samples, std::uint64_t seed);

// ---- Gaussian MGF -------------------------------------------------------------

/// (1 - 2c)^{-M/2}; throws ErrorKind::Divergence for c >= 1/2.
double gaussian_mgf(double c, double m);
/// E exp(c X^2) for one standard normal by Gauss-Legendre quadrature.
double gaussian_mgf_quadrature(double c);

struct MeanEstimate {
  double mean = 0.0;
  double error = 0.0;
  std::size_t samples = 0;
};
MeanEstimate mgf_monte_carlo(double c, std::size_t m, std::size_t samples,
                             std::uint64_t seed);

// ---- Bernstein probe ------------------------------------------------------------

struct BernsteinProbe {
  int block = 0;
  double p = 0.0;
  double constant = 0.0;  // max ratio over trials
  std::size_t argmax = 0;
  std::vector<double> ratios;
  SpectralField1D maximizer = SpectralField1D::zero(1);
};

/// ||u_j||_p / (2^{j(1/2-1/p)} ||u_j||_2) for the block-j part of u.
double bernstein_ratio(const SpectralField1D& u, int j, double p);

/// Trials alternate random-phase Gaussian blocks and phase-coherent blocks
/// with random amplitudes.
BernsteinProbe bernstein_probe(int j, double p, std::size_t trials,
                               std::uint64_t seed = 1);

/// Maps the probed Bernstein constant to the constant in the block chi-square
/// event for the given spectral weights.
double effective_bernstein_constant(double probed, Normalization norm);

// ---- dyadic schedule and high-frequency bound ------------------------------------

struct DyadicSchedule {
  double lambda = 0.0;
  int k = 0;
  double r = 0.0;
  int p = 0;
  std::vector<double> values;  // lambda_j, j = k .. k + values.size() - 1
  double closed_form_sum = 0.0;  // lambda (1 - 2^{-r n})
  double tail = 0.0;             // lambda 2^{-r n}, the remainder past the listed terms
  /// Smallest k for which the chi-square bound applies to every block j >= k.
  int minimal_valid_k = 0;
  bool valid_at_k = false;
};

/// Throws InvalidArgument unless 0 < r < 1/p and lambda > 0.
DyadicSchedule dyadic_schedule(double lambda, int k, double r, int p,
                               double effective_constant, std::size_t terms = 64);

struct HighFreqBound {
  double bound = 0.0;
  double log_bound = 0.0;
  double prefactor = 0.0;  // C_{r, lambda}
  double exponent = 0.0;   // a_k
  bool valid = false;
};

/// P(||u_{>=k}||_p > lambda) <= C_{r,lambda} exp(-a_k),
/// a_k = lambda^2 (1-2^{-r})^2 2^{(1+2/p)k} / (4 C^2), with the geometric-tail
/// prefactor C_{r,lambda} = 1 / (1 - exp(-a_k (1 + 2/p - 2r) ln 2)).
HighFreqBound high_freq_tail_bound(int k, double lambda, double r, int p,
                                   double effective_constant);

/// Empirical P(||u_{>=k}||_p > lambda) for N-mode loops.
BinomialEstimate high_freq_empirical(int k, double lambda, int p, std::size_t n_modes,
                                     std::size_t samples, std::uint64_t seed,
                                     Normalization norm = Normalization::Gff);

// ---- Fernique and 2D block tails ---------------------------------------------------

struct FerniqueProbe {
  std::vector<double> t;
  std::vector<double> empirical;
  std::vector<double> error;
  double mean = 0.0;
  /// min over t with empirical > 0 of -ln(empirical) / t^2; +inf when no
  /// level is exceeded.
  double c_hat = std::numeric_limits<double>::infinity();
};

FerniqueProbe fernique_probe(std::span<const double> norm_samples,
                             std::span<const double> t_grid);

struct BlockTail2D {
  int k = 0;
  double lambda = 0.0;
  double s = 0.0;
  std::vector<double> epsilon;
  std::vector<double> terms;  // per j >= k; +inf-free, 1 where t_j <= 1
  std::vector<bool> term_valid;
  double sum = 0.0;            // sum of terms
  double closing_bound = 0.0;  // C exp(-c'' lambda^2 2^k)
  double closing_prefactor = 0.0;
  double c_double_prime = 0.0;
  bool valid = false;  // every term satisfies t_j > 1
};

/// epsilon_j = (1 - 2^{-s}) 2^{ks} 2^{-js}; terms exp(-c' eps_j^2 lambda^2 2^j)
/// with c' = c_hat / block_constant^2, where E||v_j||_4 <= block_constant 2^{-j/2}.
BlockTail2D block_tail_2d(int k, double lambda, double s, double c_hat,
                          double block_constant, std::size_t terms = 48);
/// Explicit schedule variant; throws InvalidArgument unless it sums to 1.
BlockTail2D block_tail_2d(int k, double lambda, std::span<const double> epsilon,
                          double c_hat, double block_constant);

/// Empirical P(||v_{>=k}||_{L^4} >= lambda) for N-mode radial fields.
BinomialEstimate block_tail_empirical_2d(int k, double lambda, std::size_t n_modes,
                                         std::size_t samples, std::uint64_t seed);

// ---- exponent fit ---------------------------------------------------------------

struct TailExponentFit {
  double exponent = 0.0;  // slope of log(-log P) against log lambda
  double error = 0.0;
  std::size_t points = 0;
  double reference_p = 0.0;            // e^{-c lambda^p}
  double reference_dyadic = 0.0;       // e^{-c lambda^{4p/(p-2)}}
};

/// Fits over resolvable rows with 0 < empirical < 1 and level > 0.
TailExponentFit fit_tail_exponent(const TailCurve& curve, double p);

}  // namespace gibbslab
