// Copyright 2026 The Authors.
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

#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace submod_pricing {

// Worker cap for batch commands. Defaults to 1 so that per-point wall-clock
// measurements stay meaningful; SUBMOD_PRICING_THREADS raises (and caps) it.
inline int thread_cap() {
  const char* env = std::getenv("SUBMOD_PRICING_THREADS");
  if (env == nullptr) return 1;
  const int requested = std::atoi(env);
  if (requested < 1) return 1;
  const int hardware =
      std::max(1u, std::thread::hardware_concurrency());
  return std::min(requested, hardware);
}

// Runs fn(0..count-1), possibly on thread_cap() workers. Results must be
// written to disjoint slots; ordering of side effects is not specified.
template <class Fn>
void parallel_for_index(int count, Fn&& fn) {
  const int workers = std::min(thread_cap(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace submod_pricing
