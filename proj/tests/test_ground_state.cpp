// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "gibbslab/error.hpp"
#include "gibbslab/ground_state.hpp"
#include "oracles.hpp"

using namespace gibbslab;
using std::numbers::pi;

namespace {

const GroundState& gs1d6() {
  static const GroundState gs = solve_ground_state(1, 6);
  return gs;
}
const GroundState& gs2d4() {
  static const GroundState gs = solve_ground_state(2, 4);
  return gs;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("admissible exponents") {
  CHECK_THROWS_AS(solve_ground_state(1, 5), Error);
  CHECK_THROWS_AS(solve_ground_state(1, 8), Error);
  CHECK_THROWS_AS(solve_ground_state(2, 6), Error);
  CHECK_THROWS_AS(solve_ground_state(3, 4), Error);
  CHECK_THROWS_AS(solve_ground_state(1, 2), Error);
}

TEST_CASE("1D p=6 closed form mass and constant") {
  const auto& gs = gs1d6();
  CHECK(rel(gs.mass() * gs.mass(), std::sqrt(3.0) * pi) < 1e-8);
  CHECK(gs.mass_error() < 1e-8);
  CHECK(rel(gs.gns_constant(), 1.0 / (pi * pi)) < 1e-10);
  CHECK(std::abs(gs.gns_constant() * std::pow(gs.mass(), 4) - 3.0) < 1e-12);
  CHECK(gs.residual_max() < 1e-10);
  CHECK(gs.grid().size() >= 1000);
  CHECK(gs.edge_ratio() < 1e-10);
  // phi(x) = 24^{1/4} sech^{1/2}(2 sqrt2 x)
  CHECK(gs.center_value() == doctest::Approx(std::pow(24.0, 0.25)).epsilon(1e-14));
  // Pohozaev in 1D: ||phi'||^2 = ||phi||^2.
  CHECK(rel(gs.grad_norm(), gs.mass()) < 1e-8);
  // inf J = pi^2 / 4 for the sextic problem on the line.
  CHECK(rel(gs.functional_minimum(), pi * pi / 4.0) < 1e-7);
}

TEST_CASE("1D p=4 closed form") {
  const auto gs = solve_ground_state(1, 4);
  const auto prof = sech_profile(4);
  // phi = sqrt(12) sech(sqrt3 x); mass^2 = 8 sqrt3.
  CHECK(prof.amplitude == doctest::Approx(std::sqrt(12.0)).epsilon(1e-14));
  CHECK(rel(gs.mass() * gs.mass(), 8.0 * std::sqrt(3.0)) < 1e-9);
  CHECK(gs.residual_max() < 1e-10);
  CHECK(std::abs(gs.gns_constant() * gs.mass() * gs.mass() - 2.0) < 1e-12);
}

TEST_CASE("2D p=4 agrees with the rescaled Townes oracle") {
  const auto& gs = gs2d4();
  const auto townes = oracle::townes();
  // phi(r) = sqrt6 psi(sqrt3 r) => phi(0) = sqrt6 psi(0), mass^2 = 2 ||psi||^2.
  CHECK(rel(gs.center_value(), std::sqrt(6.0) * static_cast<double>(townes.center)) < 1e-8);
  CHECK(rel(gs.mass() * gs.mass(), 2.0 * static_cast<double>(townes.mass_sq)) < 1e-6);
  CHECK(static_cast<double>(townes.mass_sq) == doctest::Approx(11.7008965).epsilon(1e-7));
  CHECK(gs.residual_max() < 1e-8);
  CHECK(gs.edge_ratio() < 1e-10);
  CHECK(gs.mass_error() < 1e-8);
  CHECK(std::abs(gs.gns_constant() * gs.mass() * gs.mass() - 2.0) < 1e-12);
  // Pohozaev in 2D for p = 4: ||grad phi||^2 = 3 ||phi||^2, inf J = ||phi||^2 / 4.
  CHECK(rel(gs.grad_norm() * gs.grad_norm(), 3.0 * gs.mass() * gs.mass()) < 1e-7);
  CHECK(rel(gs.functional_minimum(), gs.mass() * gs.mass() / 4.0) < 1e-7);
}

TEST_CASE("profile positive, decreasing, interpolates") {
  for (const GroundState* gs : {&gs1d6(), &gs2d4()}) {
    const auto phi = gs->profile();
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
      REQUIRE(phi[i] > 0.0);
      REQUIRE(phi[i + 1] < phi[i]);
    }
    const double h = gs->spacing();
    CHECK(gs->value(3 * h) == phi[3]);
    const double mid = gs->value(3.5 * h);
    CHECK(mid < phi[3]);
    CHECK(mid > phi[4]);
    CHECK(gs->value(gs->extent() + 1.0) == 0.0);
  }
  const auto prof = sech_profile(6);
  for (double x : {0.0123, 0.5, 1.777, 4.2})
    CHECK(rel(gs1d6().value(x), prof.value(x)) < 1e-10);
}

TEST_CASE("mass grid convergence") {
  for (const GroundState* gs : {&gs1d6(), &gs2d4()}) {
    CHECK(gs->mass_error() < 1e-8);
    CHECK(gs->mass_order() >= 2.0);
  }
}

TEST_CASE("scale invariance of the functional") {
  for (const GroundState* gs : {&gs1d6(), &gs2d4()}) {
    const double ref = gs->functional_minimum();
    for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double h = 1e-3 / lambda;
      const auto f = scaled_profile(*gs, lambda, h, gs->extent() / lambda);
      CHECK(rel(gns_functional(f, gs->p()), ref) < 1e-6);
    }
  }
}

TEST_CASE("functional rejects zero and bumps lie above the minimum") {
  GridFunction zero{Geometry::Line, 0.01, -1.0, std::vector<double>(201, 0.0)};
  CHECK_THROWS_AS(gns_functional(zero, 6.0), Error);

  const double c = gs1d6().functional_minimum();
  GridFunction bump{Geometry::Line, 0.005, -15.0, {}};
  for (int i = 0; i <= 6000; ++i) {
    const double x = -15.0 + 0.005 * i;
    bump.values.push_back(std::exp(-x * x));
  }
  CHECK(gns_functional(bump, 6.0) > c);

  // phi + 0.1 * perturbation.
  const auto& gs = gs1d6();
  GridFunction pert = scaled_profile(gs, 1.0, 2e-3, gs.extent());
  for (std::size_t i = 0; i < pert.values.size(); ++i) {
    const double x = static_cast<double>(i) * 2e-3;
    pert.values[i] += 0.1 * std::exp(-(x - 0.7) * (x - 0.7));
  }
  CHECK(gns_functional(pert, 6.0) - c > 1e-6);
}

TEST_CASE("minimality over random corpora") {
  std::mt19937_64 rng(20261014);
  const double c1 = gs1d6().functional_minimum();
  const double c2 = gs2d4().functional_minimum();
  double min1 = 1e300, min2 = 1e300;
  for (int i = 0; i < 1000; ++i) {
    min1 = std::min(min1, gns_functional(oracle::random_bump_function(rng, Geometry::Line, 5e-3, 25.0), 6.0));
    min2 = std::min(min2, gns_functional(oracle::random_bump_function(rng, Geometry::Radial, 5e-3, 25.0), 4.0));
  }
  CHECK(min1 >= c1 - 1e-9);
  CHECK(min2 >= c2 - 1e-9);
}

TEST_CASE("periodic probe") {
  const auto& gs = gs1d6();
  const auto corpus = periodic_corpus(300, 7);
  double prev = 1e300;
  for (double m : {0.1, 1.0, 10.0}) {
    const auto probe = periodic_gns_probe(gs, m, corpus);
    for (double v : probe.values) REQUIRE(std::isfinite(v));
    CHECK(probe.bound <= prev);
    prev = probe.bound;
  }
  CHECK_THROWS_AS(periodic_gns_probe(gs, 0.0, corpus), Error);

  // Single mode u = cos(2 pi n x): ||u||_6^6 = 5/16, ||u||^2 = 1/2,
  // ||u'||^2 = (2 pi n)^2 / 2.
  for (std::size_t n : {1u, 3u, 8u}) {
    std::vector<double> xi(2 * n, 0.0);
    xi[2 * (n - 1)] = 1.0;  // c_n = w_n / sqrt2, u = sqrt2 w_n cos(2 pi n x)
    const auto u = SpectralField1D::from_whitened(Normalization::Gff, xi);
    const double amp = std::sqrt(2.0) / (2.0 * pi * n);
    const double m = 1.0;
    const double cc = gs.sharp_constant() + m;
    const double l2 = amp / std::sqrt(2.0);
    const double grad = amp * 2.0 * pi * n / std::sqrt(2.0);
    const double expected =
        (5.0 / 16.0 * std::pow(amp, 6) - cc * std::pow(grad, 2) * std::pow(l2, 4)) / std::pow(l2, 6);
    const std::vector<SpectralField1D> one{u};
    CHECK(periodic_gns_probe(gs, m, one).bound == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("disc inequality") {
  const auto& gs = gs2d4();
  const auto table = bessel_zeros(400);
  const auto e1 = RadialField2D::from_coefficients(table, std::vector<double>{1.0});
  CHECK(disc_gns_check(e1, gs) < 1.0);
  CHECK_THROWS_AS(disc_gns_check(RadialField2D::zero(table, 4), gs), Error);

  const RadialQuadrature quad(table, 64, radial_node_count(*table, 64, 4.0));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i)
    worst = std::max(worst, disc_gns_check(RadialField2D::sample(11, i, 64, table), gs, quad));
  CHECK(worst <= 1.0 + 1e-9);

  const auto concentrated = project_profile_to_disc(gs, 0.01, table, 400);
  const double ratio = disc_gns_check(concentrated, gs);
  CHECK(ratio > 0.9);
  CHECK(ratio <= 1.0 + 1e-9);
}

TEST_CASE("export formats") {
  const auto& gs = gs1d6();
  const auto csv = profile_csv(gs);
  CHECK(csv.rfind("x,phi\r\n", 0) == 0);
  const auto j = nlohmann::json::parse(summary_json(gs));
  for (const char* key : {"dim", "p", "mass", "grad_norm", "gns_constant", "residual_max"})
    CHECK(j.contains(key));
  CHECK(j["mass"].get<double>() == gs.mass());
}
