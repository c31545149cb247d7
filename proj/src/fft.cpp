// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "gibbslab/error.hpp"

namespace gibbslab::detail {

namespace {

// Planning is not thread safe in FFTW; execution with new-array calls is.
struct PlanCache {
  std::mutex mutex;
  std::map<int, fftw_plan> c2r;
  std::map<int, fftw_plan> r2c;

  ~PlanCache() {
    for (auto& [n, plan] : c2r) fftw_destroy_plan(plan);
    for (auto& [n, plan] : r2c) fftw_destroy_plan(plan);
  }

  fftw_plan get(bool inverse, int n) {
    std::lock_guard lock(mutex);
    auto& table = inverse ? c2r : r2c;
    if (auto it = table.find(n); it != table.end()) return it->second;
    std::vector<double> real(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> cplx(static_cast<std::size_t>(n / 2 + 1));
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
    fftw_plan plan = inverse
                         ? fftw_plan_dft_c2r_1d(n, c, real.data(),
                                                FFTW_ESTIMATE | FFTW_UNALIGNED)
                         : fftw_plan_dft_r2c_1d(n, real.data(), c, flags);
    if (plan == nullptr) fail(ErrorKind::Numerical, "FFTW planning failed");
    table.emplace(n, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void inverse_real_dft(std::span<const std::complex<double>> half_spectrum,
                      std::span<double> out) {
  const int n = static_cast<int>(out.size());
  require(half_spectrum.size() == static_cast<std::size_t>(n / 2 + 1),
          "inverse_real_dft: spectrum length mismatch");
  // c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(half_spectrum.begin(),
                                            half_spectrum.end());
  fftw_execute_dft_c2r(cache().get(true, n),
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.data());
}

void forward_real_dft(std::span<const double> in,
                      std::span<std::complex<double>> half_spectrum) {
  const int n = static_cast<int>(in.size());
  require(half_spectrum.size() == static_cast<std::size_t>(n / 2 + 1),
          "forward_real_dft: spectrum length mismatch");
  std::vector<double> scratch(in.begin(), in.end());
  fftw_execute_dft_r2c(cache().get(false, n), scratch.data(),
                       reinterpret_cast<fftw_complex*>(half_spectrum.data()));
}

}  // namespace gibbslab::detail
