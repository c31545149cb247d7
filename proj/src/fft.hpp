// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace gibbslab::detail {

/// Real inverse DFT without normalization:
/// out[m] = sum_{n} X_n exp(+2 pi i n m / M), X Hermitian, half spectrum
/// of length M/2 + 1 supplied. The input is not modified.
void inverse_real_dft(std::span<const std::complex<double>> half_spectrum,
                      std::span<double> out);

/// Real forward DFT without normalization:
/// X_n = sum_m x_m exp(-2 pi i n m / M), n = 0..M/2.
void forward_real_dft(std::span<const double> in,
                      std::span<std::complex<double>> half_spectrum);

}  // namespace gibbslab::detail
