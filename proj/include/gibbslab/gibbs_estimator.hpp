// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/bessel_radial.hpp"
#include "gibbslab/spectral_1d.hpp"
#include "gibbslab/tail_lab.hpp"

namespace gibbslab {

enum class SamplerMode { Plain, Tilted };
const char* to_string(SamplerMode mode) noexcept;
SamplerMode sampler_from_string(const std::string& name);

/// Defensive-mixture proposal alpha N(h, I) + (1 - alpha) N(0, I) in whitened
/// coordinates.
struct TiltOptions {
  double mixture = 0.5;
  /// Shift of the lowest four modes when no concentrated profile has positive
  /// action.
  double fallback_amplitude = 1.0;
  std::size_t fallback_modes = 4;
  /// Concentration scales tried for the profile ansatz.
  std::size_t scale_count = 10;
};

struct EnsembleConfig {
  int dim = 1;
  int p = 6;
  /// L^2 cutoff radius; +inf disables the cutoff.
  double K = 1.0;
  std::size_t n_modes = 16;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 1;
  /// Grid size (1D) or radial node count (2D); 0 picks the exact/resolving size.
  std::size_t resolution = 0;
  SamplerMode sampler = SamplerMode::Plain;
  /// Replaces the exponent by 0, so the estimate is P(||u||_2 <= K).
  bool calibration = false;
  Normalization normalization = Normalization::Gff;
  RadialConvention convention = RadialConvention::Normalized;
  TiltOptions tilt{};

  static constexpr double kNoCutoff = std::numeric_limits<double>::infinity();
  /// Throws InvalidArgument or Resolution for inconsistent settings.
  void validate() const;
};

struct EstimatorReport {
  double estimate = 0.0;  // may be +inf when only the log is representable
  double log_estimate = -std::numeric_limits<double>::infinity();
  double standard_error = 0.0;
  double log_standard_error = -std::numeric_limits<double>::infinity();
  double effective_sample_size = 0.0;
  double fraction_inside_cutoff = 0.0;
  std::size_t n_modes = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  SamplerMode sampler = SamplerMode::Plain;
  /// Maximum of (1/p) int |u|^p - |h|^2/2 over the tilt candidates; NaN for
  /// plain sampling.
  double tilt_action = std::numeric_limits<double>::quiet_NaN();

  /// Standard error of log_estimate (delta method).
  double log_scale_error() const;
};

/// Per-sample record of one ensemble draw, kept for reuse by tail estimates.
struct EnsembleSamples {
  EnsembleConfig config;
  std::vector<double> log_ratio;   // log of prior / proposal density; 0 when plain
  std::vector<double> lp_integral; // int |u|^p
  std::vector<double> l2_sq;       // ||u||_2^2 (spectral)
  double tilt_action = std::numeric_limits<double>::quiet_NaN();

  bool inside(std::size_t i) const { return l2_sq[i] <= config.K * config.K; }
};

EnsembleSamples sample_ensemble(const EnsembleConfig& cfg);
EstimatorReport summarize_partition(const EnsembleSamples& samples);
EstimatorReport estimate_partition(const EnsembleConfig& cfg);

/// Estimate of P(||u||_p > lambda, ||u||_2 <= K) with its standard error.
EstimatorReport constrained_tail(const EnsembleConfig& cfg, double lambda);
EstimatorReport constrained_tail(const EnsembleSamples& samples, double lambda);
/// Tail probabilities at every level from one sample set; levels strictly
/// increasing, starting at 0.
TailCurve constrained_tail_curve(const EnsembleSamples& samples,
                                 std::span<const double> levels);

struct LayerCakeResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  double truncation_term = 0.0;  // integrand at the last level times its bin width
  bool inconclusive = false;
};

/// P(A) + int_0^{lambda_max} lambda^{p-1} e^{lambda^p / p} P(||u||_p > lambda, A)
/// by the trapezoid rule; the first row must sit at level 0 and carry P(A).
LayerCakeResult layer_cake_reconstruct(const TailCurve& tail, double p);

enum class Verdict { Stable, Diverging, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct DivergenceVerdict {
  std::vector<std::size_t> schedule;
  std::vector<EstimatorReport> reports;
  std::vector<double> log_estimates;
  std::vector<double> log_errors;
  double slope = 0.0;
  double slope_error = 0.0;
  std::size_t fitted_points = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Slope threshold rules applied to the upper half of the schedule.
struct VerdictRule {
  double diverging_slope = 0.5;
  double stable_slope = 0.1;
  double separation_sigmas = 2.0;
  /// Slopes below this magnitude count as zero even when error bars are tighter.
  double practical_zero = 0.01;
};

Verdict classify_drift(double slope, double slope_error, const VerdictRule& rule = {});

DivergenceVerdict divergence_scan(const EnsembleConfig& base,
                                  std::span<const std::size_t> schedule,
                                  const VerdictRule& rule = {});

std::string to_json(const EstimatorReport& report);
std::string to_json(const EnsembleConfig& cfg);
/// Columns N,n_samples,log_estimate,stderr,fraction_inside_cutoff with stderr on
/// the log scale.
std::string scan_csv(const DivergenceVerdict& scan);

}  // namespace gibbslab
