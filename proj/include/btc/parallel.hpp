// Copyright 2026 The btc-magic Authors
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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace btc {

// Worker count: `requested` if > 0, else the BTC_THREADS environment
// variable if set and > 0, else std::thread::hardware_concurrency().
int resolve_workers(int requested = 0);

// Runs fn(i) for i in [0, n) on up to `workers` threads. Tasks must write
// only to their own slot of any shared output. If tasks throw, the
// exception of the lowest failing index is rethrown after all workers
// join, so the reported error does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  const std::size_t n_workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(workers < 1 ? 1 : workers));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace btc
