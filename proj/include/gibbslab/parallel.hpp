// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace gibbslab {

/// Worker count: GIBBSLAB_WORKERS if set and positive, else hardware
/// concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on a pool of worker_count() threads.
///
/// Indices are handed out in contiguous chunks; body must write only to
/// per-index storage so the result does not depend on scheduling.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

/// Splits [0, count) into fixed chunks and evaluates fn(begin, end) for each
/// in parallel. The chunk layout does not depend on the worker count, so
/// reductions over the returned vector are deterministic.
template <class T, class Fn>
std::vector<T> map_chunks(std::size_t count, std::size_t chunk, Fn&& fn) {
  const std::size_t chunks = chunk == 0 ? 0 : (count + chunk - 1) / chunk;
  std::vector<T> out(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    out[c] = fn(c * chunk, std::min(count, (c + 1) * chunk));
  });
  return out;
}

}  // namespace gibbslab
