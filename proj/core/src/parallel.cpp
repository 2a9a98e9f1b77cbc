// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace ircnn {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int n) { g_threads.store(std::max(1, n)); }

int get_threads() { return g_threads.load(); }

void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
  if (count <= 0) return;
  const int workers =
      static_cast<int>(std::min<std::int64_t>(get_threads(), count));
  if (workers == 1) {
    chunk_fn(0, count);
    return;
  }
  const std::int64_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int t = 1; t < workers; ++t) {
    const std::int64_t begin = t * chunk;
    const std::int64_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&chunk_fn, begin, end] { chunk_fn(begin, end); });
  }
  chunk_fn(0, std::min(count, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace ircnn
