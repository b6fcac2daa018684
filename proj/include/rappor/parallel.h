// Copyright 2026 The Rapporkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAPPOR_PARALLEL_H_
#define RAPPOR_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace rappor {

// Worker count: RAPPOR_THREADS when set to a positive integer, otherwise the
// hardware concurrency.
inline int ThreadCountFromEnv() {
  if (const char* env = std::getenv("RAPPOR_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Results must be
// written to per-index slots so the outcome does not depend on `threads`.
template <typename Fn>
void ParallelFor(size_t n, int threads, Fn&& fn) {
  const size_t workers =
      std::min(n, static_cast<size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    if (n > 0) fn(size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace rappor

#endif  // RAPPOR_PARALLEL_H_
