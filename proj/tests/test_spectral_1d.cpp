// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gibbslab/error.hpp"
#include "gibbslab/random.hpp"
#include "gibbslab/spectral_1d.hpp"

using namespace gibbslab;
using std::numbers::pi;

namespace {

SpectralField1D single_cosine(Normalization norm = Normalization::Gff) {
  const std::vector<std::complex<double>> c = {{0.5, 0.0}};
  return SpectralField1D::from_coefficients(norm, c);
}

double max_abs_diff(const GridSamples1D& a, const GridSamples1D& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace

TEST_CASE("sample_loop is deterministic in (seed, stream)") {
  auto a = SpectralField1D::sample(11, 0, 1);
  auto b = SpectralField1D::sample(11, 0, 1);
  CHECK(a.coeff(1) == b.coeff(1));
  CHECK(a.coeff(-1) == std::conj(a.coeff(1)));
  CHECK(SpectralField1D::sample(11, 1, 1).coeff(1) != a.coeff(1));
}

TEST_CASE("sample_loop rejects zero modes") {
  CHECK_THROWS_AS(SpectralField1D::sample(1, 0, 0), Error);
}

TEST_CASE("sampled fields have zero mean and are real") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto f = SpectralField1D::sample(3, s, 24);
    auto g = evaluate_grid(f, 96);
    double mean = 0;
    for (double v : g.values) mean += v;
    CHECK(std::abs(mean / 96.0) < 1e-12);
    // imaginary part of the direct Hermitian sum
    double max_imag = 0;
    for (int m = 0; m < 96; ++m) {
      std::complex<double> sum = 0;
      for (long n = -24; n <= 24; ++n)
        if (n != 0) sum += f.coeff(n) * std::polar(1.0, 2 * pi * n * m / 96.0);
      max_imag = std::max(max_imag, std::abs(sum.imag()));
    }
    CHECK(max_imag < 1e-12);
  }
}

TEST_CASE("GFF Dirichlet energy is chi-square with 2N degrees of freedom") {
  const std::size_t n_modes = 64;
  const int samples = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < samples; ++i) {
    const double e = h1_seminorm_sq(SpectralField1D::sample(2024, i, n_modes));
    s += e;
    s2 += e * e;
  }
  const double mean = s / samples;
  const double var = s2 / samples - mean * mean;
  const double dof = 2.0 * n_modes;
  CHECK(std::abs(mean - dof) < 3.0 * std::sqrt(2.0 * dof / samples));
  // Var(chi2_k) = 2k; sd of the sample variance ~ sqrt((8k^2 + 48k)/n) for chi2
  CHECK(std::abs(var - 2.0 * dof) < 3.0 * std::sqrt((8.0 * dof * dof + 48.0 * dof) / samples));
}

TEST_CASE("GFF energy equals the stored Gaussian squares exactly") {
  auto f = SpectralField1D::sample(5, 9, 33);
  double s = 0;
  for (double x : f.whitened()) s += x * x;
  CHECK(h1_seminorm_sq(f) == s);
}

TEST_CASE("zero field") {
  auto z = SpectralField1D::zero(8);
  CHECK(l2_norm_spectral(z) == 0.0);
  CHECK(lp_norm(evaluate_grid(z, 32), 6) == 0.0);
  auto hi = dyadic_project(z, ProjectionKind::High, 1);
  for (double x : hi.whitened()) CHECK(x == 0.0);
  for (double v : evaluate_grid(z, 32).values) CHECK(v == 0.0);
  CHECK(h1_seminorm(z) == 0.0);
}

TEST_CASE("dyadic projections partition the frequencies") {
  auto f = SpectralField1D::sample(8, 1, 100);
  for (int k = 1; k <= 8; ++k) {
    auto lo = dyadic_project(f, ProjectionKind::Low, k - 1);
    auto hi = dyadic_project(f, ProjectionKind::High, k);
    for (std::size_t i = 0; i < f.whitened().size(); ++i)
      CHECK(lo.whitened()[i] + hi.whitened()[i] == f.whitened()[i]);
  }
  // Parseval additivity over the blocks.
  double blocks = 0;
  for (int j = 1; j <= 8; ++j)
    blocks += l2_norm_spectral_sq(dyadic_project(f, ProjectionKind::Block, j));
  CHECK(blocks == doctest::Approx(l2_norm_spectral_sq(f)).epsilon(1e-14));
}

TEST_CASE("support below 2^k vanishes under High(k+1)") {
  for (int k = 0; k <= 5; ++k) {
    auto f = SpectralField1D::sample(4, k, std::size_t{1} << k);
    auto hi = dyadic_project(f, ProjectionKind::High, k + 1);
    CHECK(l2_norm_spectral(hi) == 0.0);
  }
}

TEST_CASE("single cosine mode") {
  auto f = single_cosine();
  auto g = evaluate_grid(f, 16);
  for (int m = 0; m < 16; ++m) CHECK(g.values[m] == doctest::Approx(std::cos(2 * pi * m / 16.0)).epsilon(1e-14));
  CHECK(l2_norm_spectral(f) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  // closed forms: int cos^2 = 1/2, cos^4 = 3/8, cos^6 = 5/16
  auto fine = evaluate_grid(f, 64);
  CHECK(lp_integral(fine, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lp_integral(fine, 4) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
  CHECK(lp_integral(fine, 6) == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
  CHECK(h1_seminorm_sq(single_cosine(Normalization::PaperLiteral)) ==
        doctest::Approx(2 * pi * pi).epsilon(1e-14));
}

TEST_CASE("aliasing grids are rejected") {
  auto f = SpectralField1D::sample(1, 1, 32);
  CHECK_THROWS_AS(evaluate_grid(f, 127), Error);
  try {
    evaluate_grid(f, 100);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resolution);
  }
}

TEST_CASE("transform agrees with direct summation") {
  for (int s = 0; s < 5; ++s) {
    auto f = SpectralField1D::sample(77, s, 32);
    CHECK(max_abs_diff(evaluate_grid(f, 128), evaluate_grid_direct(f, 128)) < 1e-10);
  }
}

TEST_CASE("Parseval against quadrature for N up to 256") {
  for (std::size_t n : {1u, 3u, 17u, 32u, 100u, 256u}) {
    for (int s = 0; s < 4; ++s) {
      for (auto norm : {Normalization::Gff, Normalization::PaperLiteral}) {
        auto f = SpectralField1D::sample(9, s, n, norm);
        const double spectral = l2_norm_spectral_sq(f);
        const double quad = lp_integral(evaluate_grid(f, 4 * n), 2);
        CHECK(std::abs(spectral - quad) < 1e-10 * (1 + spectral));
      }
    }
  }
}

TEST_CASE("Dirichlet energy matches derivative quadrature") {
  for (auto norm : {Normalization::Gff, Normalization::PaperLiteral}) {
    auto f = SpectralField1D::sample(10, 3, 40, norm);
    const double quad = lp_integral(evaluate_derivative_grid(f, 160), 2);
    CHECK(quad == doctest::Approx(h1_seminorm_sq(f)).epsilon(1e-12));
  }
}

TEST_CASE("L^p norms are nondecreasing in p") {
  for (int s = 0; s < 1000; ++s) {
    auto g = evaluate_grid(SpectralField1D::sample(31, s, 8), 64);
    double prev = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
      const double v = lp_norm(g, p);
      CHECK(v >= prev * (1 - 1e-14));
      prev = v;
    }
  }
}

TEST_CASE("JSON record round-trips") {
  for (int s = 0; s < 3; ++s) {
    auto f = SpectralField1D::sample(12, s, 5, s % 2 ? Normalization::PaperLiteral : Normalization::Gff);
    auto g = spectral_field_from_json(to_json(f));
    CHECK(g.n_modes() == f.n_modes());
    CHECK(g.normalization() == f.normalization());
    for (long n = -5; n <= 5; ++n) CHECK(std::abs(g.coeff(n) - f.coeff(n)) < 1e-15);
  }
  CHECK_THROWS_AS(spectral_field_from_json("{\"n_modes\":1,\"normalization\":\"GFF\",\"coeffs\":[[1,1,0],[-1,1,1]]}"), Error);
}
