// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/bessel_radial.hpp"
#include "gibbslab/spectral_1d.hpp"

namespace gibbslab {

struct SolverOptions {
  double spacing = 2e-3;
  double ode_tolerance = 1e-12;
  double bisection_tolerance = 1e-12;
  double edge_ratio = 1e-10;
  double residual_tolerance = 1e-8;
};

/// Positive decaying solution of (p-2) Lap(phi) - (p+2) phi + phi^{p-1} = 0
/// in dimension 1 (even profile on x >= 0) or 2 (radial profile), sampled on
/// a uniform grid x_i = i h.
class GroundState {
 public:
  int dim() const noexcept { return dim_; }
  int p() const noexcept { return p_; }
  double spacing() const noexcept { return h_; }
  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> profile() const noexcept { return phi_; }
  std::span<const double> slope() const noexcept { return dphi_; }

  double center_value() const noexcept { return phi_.front(); }
  double extent() const noexcept { return grid_.back(); }
  /// ||phi||_{L^2(R^n)}, Richardson-extrapolated over h, h/2, h/4.
  double mass() const noexcept { return mass_; }
  double mass_error() const noexcept { return mass_error_; }
  double mass_order() const noexcept { return mass_order_; }
  double grad_norm() const noexcept { return grad_norm_; }
  /// (p/2) ||phi||^{2-p}.
  double gns_constant() const noexcept { return gns_constant_; }
  /// J^{p,n}(phi), the infimum of the GNS functional.
  double functional_minimum() const noexcept { return functional_min_; }
  /// 1 / J^{p,n}(phi): best constant in ||u||_p^p <= C ||grad u||^a ||u||^b.
  double sharp_constant() const noexcept { return 1.0 / functional_min_; }
  double residual_max() const noexcept { return residual_max_; }
  double edge_ratio() const noexcept { return phi_.back() / phi_.front(); }

  /// Cubic Hermite interpolation of phi and phi' at radius r >= 0; zero past
  /// the grid edge.
  double value(double r) const;
  double derivative(double r) const;

 private:
  friend GroundState solve_ground_state(int dim, int p, const SolverOptions& options);
  GroundState() = default;

  int dim_ = 0;
  int p_ = 0;
  double h_ = 0.0;
  std::vector<double> grid_;
  std::vector<double> phi_;
  std::vector<double> dphi_;
  double mass_ = 0.0;
  double mass_error_ = 0.0;
  double mass_order_ = 0.0;
  double grad_norm_ = 0.0;
  double gns_constant_ = 0.0;
  double functional_min_ = 0.0;
  double residual_max_ = 0.0;
};

/// Accepts (1, 4), (1, 6) and (2, 4). Throws InvalidArgument otherwise and
/// Numerical when the bracket or residual checks fail.
GroundState solve_ground_state(int dim, int p, const SolverOptions& options = {});

double gns_constant(const GroundState& gs);

/// Closed-form one-dimensional profile A sech^alpha(s x).
struct SechProfile {
  double amplitude;
  double alpha;
  double rate;
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
};
SechProfile sech_profile(int p);

enum class Geometry {
  Line,          // samples at origin + i h on R
  HalfLineEven,  // samples at i h, even extension to R
  Radial,        // samples at i h, radial function on R^2
};

struct GridFunction {
  Geometry geometry = Geometry::Line;
  double spacing = 0.0;
  double origin = 0.0;
  std::vector<double> values;
};

int dimension(Geometry geometry) noexcept;

/// J^{p,n}(f) = ||grad f||^{n(p-2)/2} ||f||^{2+(p-2)(2-n)/2} / ||f||_p^p with
/// fourth-order differences and composite Simpson quadrature.
double gns_functional(const GridFunction& f, double p);

/// Samples x -> phi(lambda x) on [0, extent] with the given spacing.
GridFunction scaled_profile(const GroundState& gs, double lambda, double spacing,
                            double extent);

struct PeriodicProbe {
  double margin = 0.0;
  double bound = 0.0;             // max over the corpus
  std::size_t argmax = 0;
  std::vector<double> values;     // per corpus element
};

/// Random mean-zero periodic fields: Gaussian draws at assorted truncations
/// mixed with single modes.
std::vector<SpectralField1D> periodic_corpus(std::size_t size, std::uint64_t seed);

PeriodicProbe periodic_gns_probe(const GroundState& gs, double margin,
                                 std::span<const SpectralField1D> corpus);
PeriodicProbe periodic_gns_probe(const GroundState& gs, double margin,
                                 std::size_t corpus_size, std::uint64_t seed = 1);

/// ||v||_4^4 / (C ||grad v||^2 ||v||^2) with C the sharp 2D quartic constant.
double disc_gns_check(const RadialField2D& v, const GroundState& gs);
double disc_gns_check(const RadialField2D& v, const GroundState& gs,
                      const RadialQuadrature& quad);

/// Bessel coefficients of r -> phi(r / scale) restricted to the unit disc.
RadialField2D project_profile_to_disc(const GroundState& gs, double scale,
                                      std::shared_ptr<const BesselTable> table,
                                      std::size_t n_modes);

/// CSV "x,phi" with CRLF line endings.
std::string profile_csv(const GroundState& gs);
/// {dim, p, mass, grad_norm, gns_constant, residual_max, ...}
std::string summary_json(const GroundState& gs);

}  // namespace gibbslab
