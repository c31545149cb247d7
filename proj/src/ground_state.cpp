// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "dopri.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/numerics.hpp"
#include "gibbslab/random.hpp"

namespace gibbslab {

using std::numbers::pi;

namespace {

void check_exponent(int dim, int p) {
  if (dim != 1 && dim != 2)
    fail(ErrorKind::InvalidArgument, "ground state: dimension must be 1 or 2");
  if (p <= 2 || p % 2 != 0)
    fail(ErrorKind::InvalidArgument, "ground state: p must be an even integer > 2");
  if ((dim == 1 && p > 6) || (dim == 2 && p > 4))
    fail(ErrorKind::InvalidArgument,
         "ground state: p = " + std::to_string(p) + " outside the admissible range for dim " +
             std::to_string(dim));
}

std::size_t grid_points(double extent, double h) {
  return static_cast<std::size_t>(std::llround(extent / h)) + 1;
}

/// Integral of f over R^n from radial or even half-line samples f(i h).
double radial_integral(std::span<const double> f, double h, int dim) {
  if (dim == 1) return 2.0 * simpson(f, h);
  std::vector<double> weighted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) weighted[i] = f[i] * static_cast<double>(i) * h;
  return 2.0 * pi * simpson(weighted, h);
}

double mass_sq_on_grid(std::span<const double> phi, double h, int dim) {
  std::vector<double> sq(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) sq[i] = phi[i] * phi[i];
  return radial_integral(sq, h, dim);
}

struct Richardson {
  double value;
  double error;
  double order;
};

Richardson richardson(double coarse, double mid, double fine) {
  const double d1 = coarse - mid;
  const double d2 = mid - fine;
  Richardson r{fine, 0.0, std::numeric_limits<double>::infinity()};
  // Differences at rounding level leave the order unresolved; report +inf.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fine);
  if (std::abs(d1) > floor && std::abs(d2) > floor) r.order = std::log2(std::abs(d1 / d2));
  r.value = fine + d2 / 15.0;
  r.error = std::abs(d2) / 15.0 + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(fine);
  return r;
}

// ---- radial shooting --------------------------------------------------------

using State = std::array<double, 2>;

struct RadialOde {
  double p;
  double source(double phi) const {
    return ((p + 2.0) * phi - std::pow(phi, p - 1.0)) / (p - 2.0);
  }
  double source_slope(double phi) const {
    return ((p + 2.0) - (p - 1.0) * std::pow(phi, p - 2.0)) / (p - 2.0);
  }
  void operator()(double r, const State& y, State& dy) const {
    dy[0] = y[1];
    dy[1] = source(y[0]) - y[1] / r;
  }
  /// Taylor start phi = c0 + c2 r^2 + c4 r^4.
  State series(double c0, double r) const {
    const double c2 = source(c0) / 4.0;
    const double c4 = source_slope(c0) * c2 / 16.0;
    return {c0 + c2 * r * r + c4 * r * r * r * r, 2.0 * c2 * r + 4.0 * c4 * r * r * r};
  }
};

constexpr double kSeriesRadius = 1e-3;

enum class Outcome { Overshoot, Undershoot };

class RadialShooter {
 public:
  RadialShooter(int p, const SolverOptions& opt)
      : ode_{static_cast<double>(p)},
        kappa_(std::sqrt((p + 2.0) / (p - 2.0))),
        rtol_(opt.ode_tolerance),
        options_(opt) {}

  double kappa() const { return kappa_; }

  Outcome classify(double c0, double r_end) const {
    State y = ode_.series(c0, kSeriesRadius);
    bool over = false, under = false;
    detail::Dopri5<2> solver(rtol_, rtol_ * 1e-6);
    solver.advance(ode_, y, kSeriesRadius, r_end, [&](double, const State& s) {
      if (s[0] < 0.0) over = true;
      else if (s[1] > 0.0) under = true;
      return over || under;
    });
    if (over) return Outcome::Overshoot;
    if (under) return Outcome::Undershoot;
    return y[0] > 0.0 ? Outcome::Undershoot : Outcome::Overshoot;
  }

  State shoot_out(double c0, double r_to) const {
    State y = ode_.series(c0, std::min(kSeriesRadius, r_to));
    if (r_to <= kSeriesRadius) return y;
    detail::Dopri5<2> solver(rtol_, rtol_ * 1e-6);
    solver.advance(ode_, y, kSeriesRadius, r_to);
    return y;
  }

  State tail(double amplitude, double r) const {
    return {amplitude * std::cyl_bessel_k(0.0, kappa_ * r),
            -amplitude * kappa_ * std::cyl_bessel_k(1.0, kappa_ * r)};
  }

  State shoot_in(double amplitude, double r_max, double r_to) const {
    State y = tail(amplitude, r_max);
    detail::Dopri5<2> solver(rtol_, 0.0);
    solver.advance(ode_, y, r_max, r_to);
    return y;
  }

  /// Samples the matched solution on i h, i = 0..n-1; r_fit and r_max are
  /// multiples of h.
  void sample(double c0, double amplitude, double r_fit, double r_max, double h,
              std::vector<double>& phi, std::vector<double>& dphi) const {
    const std::size_t n = grid_points(r_max, h);
    const std::size_t i_fit = grid_points(r_fit, h) - 1;
    phi.assign(n, 0.0);
    dphi.assign(n, 0.0);
    phi[0] = c0;
    detail::Dopri5<2> out(rtol_, rtol_ * 1e-6);
    State y{};
    double r = 0.0;
    for (std::size_t i = 1; i <= i_fit; ++i) {
      const double ri = static_cast<double>(i) * h;
      if (ri <= kSeriesRadius) {
        y = ode_.series(c0, ri);
      } else {
        if (r < kSeriesRadius) {
          y = ode_.series(c0, kSeriesRadius);
          r = kSeriesRadius;
        }
        out.advance(ode_, y, r, ri);
      }
      r = ri;
      phi[i] = y[0];
      dphi[i] = y[1];
    }
    detail::Dopri5<2> in(rtol_, 0.0);
    y = tail(amplitude, r_max);
    phi[n - 1] = y[0];
    dphi[n - 1] = y[1];
    r = r_max;
    for (std::size_t i = n - 1; i-- > i_fit + 1;) {
      const double ri = static_cast<double>(i) * h;
      in.advance(ode_, y, r, ri);
      r = ri;
      phi[i] = y[0];
      dphi[i] = y[1];
    }
  }

 private:
  RadialOde ode_;
  double kappa_;
  double rtol_;
  SolverOptions options_;
};

struct MatchedSolution {
  double c0;
  double amplitude;
  double r_fit;
  double r_max;
};

MatchedSolution solve_radial(int p, const SolverOptions& opt) {
  const RadialShooter shooter(p, opt);
  const double kappa = shooter.kappa();
  const double h = opt.spacing;
  const double equilibrium = std::pow(p + 2.0, 1.0 / (p - 2.0));
  const double r_probe = 40.0 / kappa;

  double lo = equilibrium * (1.0 + 1e-9);
  if (shooter.classify(lo, r_probe) != Outcome::Undershoot)
    fail(ErrorKind::Numerical, "ground state: lower bracket does not undershoot");
  double hi = 2.0 * equilibrium;
  int expansions = 0;
  while (shooter.classify(hi, r_probe) != Outcome::Overshoot) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 40) fail(ErrorKind::Numerical, "ground state: no overshooting bracket found");
  }
  while (hi - lo > opt.bisection_tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shooter.classify(mid, r_probe) == Outcome::Overshoot ? hi : lo) = mid;
  }
  double c0 = 0.5 * (lo + hi);

  // Two-sided match against the linearized tail A K_0(kappa r).
  const double r_fit = h * std::round(std::log(100.0) / kappa / h);
  State inner = shooter.shoot_out(c0, r_fit);
  double amplitude = inner[0] / std::cyl_bessel_k(0.0, kappa * r_fit);
  if (!(amplitude > 0.0)) fail(ErrorKind::Numerical, "ground state: nonpositive tail amplitude");

  double r_max = r_fit + 1.0;
  while (amplitude * std::cyl_bessel_k(0.0, kappa * r_max) > 0.1 * opt.edge_ratio * c0) r_max += 0.25;
  r_max = h * std::ceil(r_max / h);

  for (int iter = 0; iter < 30; ++iter) {
    inner = shooter.shoot_out(c0, r_fit);
    const State outer = shooter.shoot_in(amplitude, r_max, r_fit);
    const double f0 = inner[0] - outer[0];
    const double f1 = inner[1] - outer[1];
    if (std::abs(f0) + std::abs(f1) < 1e-14 * c0) break;
    const double dc = 1e-7 * c0;
    const double da = 1e-7 * amplitude;
    const State inner_c = shooter.shoot_out(c0 + dc, r_fit);
    const State outer_a = shooter.shoot_in(amplitude + da, r_max, r_fit);
    const double j00 = (inner_c[0] - inner[0]) / dc, j10 = (inner_c[1] - inner[1]) / dc;
    const double j01 = -(outer_a[0] - outer[0]) / da, j11 = -(outer_a[1] - outer[1]) / da;
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) fail(ErrorKind::Numerical, "ground state: singular match");
    c0 -= (j11 * f0 - j01 * f1) / det;
    amplitude -= (-j10 * f0 + j00 * f1) / det;
    if (iter == 29) fail(ErrorKind::Numerical, "ground state: tail match did not converge");
  }
  return {c0, amplitude, r_fit, r_max};
}

/// Max-norm residual with phi'' from sixth-order differences of phi'.
double residual_from_slope(std::span<const double> phi, std::span<const double> dphi, double h,
                           int dim, int p) {
  const std::size_t n = phi.size();
  auto slope = [&](long i) { return i < 0 ? -dphi[static_cast<std::size_t>(-i)] : dphi[static_cast<std::size_t>(i)]; };
  double worst = 0.0;
  for (std::size_t i = 1; i + 3 < n; ++i) {
    const long j = static_cast<long>(i);
    const double d2 = (slope(j + 3) - 9.0 * slope(j + 2) + 45.0 * slope(j + 1) - 45.0 * slope(j - 1) +
                       9.0 * slope(j - 2) - slope(j - 3)) / (60.0 * h);
    const double lap = d2 + (dim - 1) * dphi[i] / (static_cast<double>(i) * h);
    const double res = (p - 2.0) * lap - (p + 2.0) * phi[i] + std::pow(phi[i], p - 1.0);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace

// ---- closed form ------------------------------------------------------------

SechProfile sech_profile(int p) {
  check_exponent(1, p);
  const double q = p;
  const double a = std::pow(q + 2.0, 1.0 / (q - 2.0));
  const double b = std::sqrt((q + 2.0) / (q - 2.0));
  return {a * std::pow(q / 2.0, 1.0 / (q - 2.0)), 2.0 / (q - 2.0), b * (q - 2.0) / 2.0};
}

double SechProfile::value(double x) const {
  return amplitude * std::pow(1.0 / std::cosh(rate * x), alpha);
}

double SechProfile::derivative(double x) const {
  return -amplitude * alpha * rate * std::pow(1.0 / std::cosh(rate * x), alpha) *
         std::tanh(rate * x);
}

double SechProfile::second_derivative(double x) const {
  const double s = 1.0 / std::cosh(rate * x);
  const double t = std::tanh(rate * x);
  return amplitude * alpha * rate * rate * std::pow(s, alpha) * (alpha * t * t - s * s);
}

// ---- GroundState -----------------------------------------------------------

double GroundState::value(double r) const {
  r = std::abs(r);
  if (r >= grid_.back()) return 0.0;
  const auto i = static_cast<std::size_t>(r / h_);
  const double t = (r - static_cast<double>(i) * h_) / h_;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * phi_[i] + h10 * h_ * dphi_[i] + h01 * phi_[i + 1] + h11 * h_ * dphi_[i + 1];
}

double GroundState::derivative(double r) const {
  const double sign = r < 0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r >= grid_.back()) return 0.0;
  const auto i = static_cast<std::size_t>(r / h_);
  const double t = (r - static_cast<double>(i) * h_) / h_;
  const double g00 = 6 * t * (t - 1), g10 = (1 - t) * (1 - 3 * t);
  const double g01 = -6 * t * (t - 1), g11 = t * (3 * t - 2);
  return sign * ((g00 * phi_[i] + g01 * phi_[i + 1]) / h_ + g10 * dphi_[i] + g11 * dphi_[i + 1]);
}

GroundState solve_ground_state(int dim, int p, const SolverOptions& options) {
  check_exponent(dim, p);
  require(options.spacing > 0.0 && options.spacing < 0.1, "ground state: spacing out of range");
  GroundState gs;
  gs.dim_ = dim;
  gs.p_ = p;
  const double h = options.spacing;
  gs.h_ = h;

  std::array<double, 3> mass_sq{};
  if (dim == 1) {
    const SechProfile prof = sech_profile(p);
    const double extent_raw =
        (prof.alpha * std::log(2.0) + std::log(1.0 / options.edge_ratio)) / (prof.alpha * prof.rate);
    const double extent = h * std::ceil(1.02 * extent_raw / h);
    const std::size_t n = grid_points(extent, h);
    gs.grid_.resize(n);
    gs.phi_.resize(n);
    gs.dphi_.resize(n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * h;
      gs.grid_[i] = x;
      gs.phi_[i] = prof.value(x);
      gs.dphi_[i] = prof.derivative(x);
      const double res = (p - 2.0) * prof.second_derivative(x) - (p + 2.0) * gs.phi_[i] +
                         std::pow(gs.phi_[i], p - 1.0);
      worst = std::max(worst, std::abs(res));
    }
    gs.residual_max_ = worst;
    for (int level = 0; level < 3; ++level) {
      const double hl = h / static_cast<double>(1 << level);
      const std::size_t nl = grid_points(extent, hl);
      std::vector<double> f(nl);
      for (std::size_t i = 0; i < nl; ++i) f[i] = prof.value(static_cast<double>(i) * hl);
      mass_sq[level] = mass_sq_on_grid(f, hl, 1);
    }
  } else {
    const MatchedSolution sol = solve_radial(p, options);
    const RadialShooter shooter(p, options);
    shooter.sample(sol.c0, sol.amplitude, sol.r_fit, sol.r_max, h, gs.phi_, gs.dphi_);
    gs.grid_.resize(gs.phi_.size());
    for (std::size_t i = 0; i < gs.grid_.size(); ++i) gs.grid_[i] = static_cast<double>(i) * h;
    gs.residual_max_ = residual_from_slope(gs.phi_, gs.dphi_, h, dim, p);
    mass_sq[0] = mass_sq_on_grid(gs.phi_, h, 2);
    std::vector<double> phi, dphi;
    for (int level = 1; level < 3; ++level) {
      const double hl = h / static_cast<double>(1 << level);
      shooter.sample(sol.c0, sol.amplitude, sol.r_fit, sol.r_max, hl, phi, dphi);
      mass_sq[level] = mass_sq_on_grid(phi, hl, 2);
    }
  }

  const Richardson rich = richardson(mass_sq[0], mass_sq[1], mass_sq[2]);
  gs.mass_ = std::sqrt(rich.value);
  gs.mass_error_ = rich.error / (2.0 * gs.mass_);
  gs.mass_order_ = rich.order;

  std::vector<double> grad_sq(gs.dphi_.size());
  for (std::size_t i = 0; i < grad_sq.size(); ++i) grad_sq[i] = gs.dphi_[i] * gs.dphi_[i];
  gs.grad_norm_ = std::sqrt(radial_integral(grad_sq, h, dim));
  gs.gns_constant_ = 0.5 * p * std::pow(gs.mass_, 2.0 - p);

  GridFunction self{dim == 1 ? Geometry::HalfLineEven : Geometry::Radial, h, 0.0, gs.phi_};
  gs.functional_min_ = gns_functional(self, p);

  for (std::size_t i = 0; i + 1 < gs.phi_.size(); ++i) {
    if (!(gs.phi_[i] > 0.0) || !(gs.phi_[i + 1] < gs.phi_[i]))
      fail(ErrorKind::Numerical, "ground state: profile is not positive and decreasing");
  }
  if (!(gs.edge_ratio() < 1e-8))
    fail(ErrorKind::Numerical, "ground state: profile has not decayed at the grid edge");
  if (!(gs.residual_max_ < options.residual_tolerance))
    fail(ErrorKind::Numerical,
         "ground state: residual " + std::to_string(gs.residual_max_) + " above tolerance");
  return gs;
}

double gns_constant(const GroundState& gs) { return gs.gns_constant(); }

// ---- GNS functional ---------------------------------------------------------

int dimension(Geometry geometry) noexcept { return geometry == Geometry::Radial ? 2 : 1; }

namespace {

std::vector<double> fourth_order_derivative(const GridFunction& f) {
  const auto& v = f.values;
  const std::size_t n = v.size();
  const double h = f.spacing;
  std::vector<double> d(n, 0.0);
  const bool mirrored = f.geometry != Geometry::Line;
  auto at = [&](long i) -> double {
    if (i < 0) return v[static_cast<std::size_t>(-i)];
    return v[static_cast<std::size_t>(i)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    const long j = static_cast<long>(i);
    const bool left_ok = mirrored || i >= 2;
    const bool right_ok = i + 2 < n;
    if (left_ok && right_ok) {
      d[i] = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * h);
    } else if (!right_ok) {
      if (i == n - 1)
        d[i] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) / (12.0 * h);
      else
        d[i] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / (12.0 * h);
    } else if (i == 0) {
      d[i] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
    } else {
      d[i] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
    }
  }
  return d;
}

double measure_integral(const GridFunction& f, std::span<const double> g) {
  switch (f.geometry) {
    case Geometry::Line: return simpson(g, f.spacing);
    case Geometry::HalfLineEven: return radial_integral(g, f.spacing, 1);
    case Geometry::Radial: return radial_integral(g, f.spacing, 2);
  }
  return 0.0;
}

}  // namespace

double gns_functional(const GridFunction& f, double p) {
  require(f.values.size() >= 6, "gns_functional: at least 6 samples required");
  require(f.spacing > 0.0, "gns_functional: spacing must be positive");
  require(p > 2.0, "gns_functional: p must exceed 2");
  const int n = dimension(f.geometry);
  const std::vector<double> d = fourth_order_derivative(f);
  std::vector<double> sq(f.values.size()), dsq(f.values.size()), pw(f.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    if (!std::isfinite(f.values[i]) || !std::isfinite(d[i]))
      fail(ErrorKind::InvalidArgument, "gns_functional: non-finite samples");
    sq[i] = f.values[i] * f.values[i];
    dsq[i] = d[i] * d[i];
    pw[i] = std::pow(std::abs(f.values[i]), p);
  }
  const double mass_sq = measure_integral(f, sq);
  const double grad_sq = measure_integral(f, dsq);
  const double lp = measure_integral(f, pw);
  if (!(lp > 0.0)) fail(ErrorKind::InvalidArgument, "gns_functional: ||f||_p vanishes");
  const double grad_exp = n * (p - 2.0) / 2.0;
  const double mass_exp = 2.0 + (p - 2.0) * (2.0 - n) / 2.0;
  return std::pow(grad_sq, grad_exp / 2.0) * std::pow(mass_sq, mass_exp / 2.0) / lp;
}

GridFunction scaled_profile(const GroundState& gs, double lambda, double spacing, double extent) {
  require(lambda > 0.0 && spacing > 0.0 && extent > spacing, "scaled_profile: bad arguments");
  GridFunction f;
  f.geometry = gs.dim() == 1 ? Geometry::HalfLineEven : Geometry::Radial;
  f.spacing = spacing;
  const std::size_t n = grid_points(extent, spacing);
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = gs.value(lambda * static_cast<double>(i) * spacing);
  return f;
}

// ---- periodic and disc inequalities ----------------------------------------

std::vector<SpectralField1D> periodic_corpus(std::size_t size, std::uint64_t seed) {
  std::vector<SpectralField1D> corpus;
  corpus.reserve(size);
  const std::uint64_t key = derive_seed(seed, 0x6e5c0a11u);
  for (std::size_t i = 0; i < size; ++i) {
    StreamRng rng(key, i);
    const auto kind = rng.next_u32() % 3;
    if (kind == 0) {
      const std::size_t n = 1 + rng.next_u32() % 16;
      std::vector<double> xi(2 * n, 0.0);
      const double phase = 2.0 * pi * rng.uniform();
      xi[2 * (n - 1)] = std::cos(phase);
      xi[2 * (n - 1) + 1] = std::sin(phase);
      corpus.push_back(SpectralField1D::from_whitened(Normalization::Gff, std::move(xi)));
    } else {
      const std::size_t n = std::size_t{1} << (rng.next_u32() % 7);
      corpus.push_back(SpectralField1D::sample(key, size + i, n, Normalization::Gff));
    }
  }
  return corpus;
}

PeriodicProbe periodic_gns_probe(const GroundState& gs, double margin,
                                 std::span<const SpectralField1D> corpus) {
  require(gs.dim() == 1, "periodic_gns_probe: requires a one-dimensional ground state");
  require(margin > 0.0, "periodic_gns_probe: margin must be positive");
  require(!corpus.empty(), "periodic_gns_probe: empty corpus");
  const double p = gs.p();
  const double c = gs.sharp_constant() + margin;
  PeriodicProbe out;
  out.margin = margin;
  out.values.resize(corpus.size());
  out.bound = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& u = corpus[i];
    const double l2 = l2_norm_spectral(u);
    require(u.n_modes() > 0 && l2 > 0.0, "periodic_gns_probe: zero field in corpus");
    const auto grid = evaluate_grid(u, exact_grid_size(u.n_modes(), p));
    const double lp = lp_integral(grid, p);
    const double value =
        (lp - c * std::pow(h1_seminorm(u), (p - 2.0) / 2.0) * std::pow(l2, (p + 2.0) / 2.0)) /
        std::pow(l2, p);
    out.values[i] = value;
    if (value > out.bound) {
      out.bound = value;
      out.argmax = i;
    }
  }
  return out;
}

PeriodicProbe periodic_gns_probe(const GroundState& gs, double margin, std::size_t corpus_size,
                                 std::uint64_t seed) {
  const auto corpus = periodic_corpus(corpus_size, seed);
  return periodic_gns_probe(gs, margin, corpus);
}

double disc_gns_check(const RadialField2D& v, const GroundState& gs, const RadialQuadrature& quad) {
  require(gs.dim() == 2 && gs.p() == 4, "disc_gns_check: requires the 2D quartic ground state");
  const double l2_sq = std::pow(radial_l2_norm_spectral(v), 2);
  const double grad_sq = grad_l2_spectral_sq(v);
  if (!(l2_sq > 0.0) || !(grad_sq > 0.0)) fail(ErrorKind::InvalidArgument, "disc_gns_check: zero field");
  return radial_lp_integral(v, 4.0, quad) / (gs.sharp_constant() * grad_sq * l2_sq);
}

double disc_gns_check(const RadialField2D& v, const GroundState& gs) {
  const RadialQuadrature quad(v.table_ptr(), v.n_modes(),
                              radial_node_count(v.table(), v.n_modes(), 4.0));
  return disc_gns_check(v, gs, quad);
}

RadialField2D project_profile_to_disc(const GroundState& gs, double scale,
                                      std::shared_ptr<const BesselTable> table,
                                      std::size_t n_modes) {
  require(gs.dim() == 2, "project_profile_to_disc: requires a 2D ground state");
  require(scale > 0.0, "project_profile_to_disc: scale must be positive");
  require(table && table->count() >= n_modes && n_modes > 0, "project_profile_to_disc: table too small");
  const double support = std::min(1.0, scale * gs.extent());
  const double z_max = table->zeros[n_modes - 1];
  const auto nodes = static_cast<std::size_t>(
      std::max(400.0, std::ceil(4.0 * z_max * support / pi + 40.0 * support / scale)));
  const GaussLegendre gl = gauss_legendre(nodes, 0.0, support);
  std::vector<double> coeffs(n_modes, 0.0);
  for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
    const double r = gl.nodes[q];
    const double f = gs.value(r / scale) * 2.0 * pi * r * gl.weights[q];
    for (std::size_t n = 1; n <= n_modes; ++n) coeffs[n - 1] += f * radial_mode(*table, n, r);
  }
  return RadialField2D::from_coefficients(std::move(table), coeffs);
}

// ---- export ------------------------------------------------------------------

std::string profile_csv(const GroundState& gs) {
  std::string out = "x,phi\r\n";
  char buf[64];
  for (std::size_t i = 0; i < gs.grid().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.17g\r\n", gs.grid()[i], gs.profile()[i]);
    out += buf;
  }
  return out;
}

std::string summary_json(const GroundState& gs) {
  nlohmann::ordered_json j;
  j["dim"] = gs.dim();
  j["p"] = gs.p();
  j["mass"] = gs.mass();
  j["mass_squared"] = gs.mass() * gs.mass();
  j["mass_error"] = gs.mass_error();
  j["grad_norm"] = gs.grad_norm();
  j["gns_constant"] = gs.gns_constant();
  j["functional_minimum"] = gs.functional_minimum();
  j["sharp_constant"] = gs.sharp_constant();
  j["residual_max"] = gs.residual_max();
  j["center_value"] = gs.center_value();
  j["edge_ratio"] = gs.edge_ratio();
  j["spacing"] = gs.spacing();
  j["extent"] = gs.extent();
  return j.dump(2);
}

}  // namespace gibbslab
