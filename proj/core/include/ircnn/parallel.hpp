// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

namespace ircnn {

/// Sets the worker count used by the numerical kernels. 1 (the default) runs
/// everything inline on the calling thread and is the mode the test suites
/// pin down. Values < 1 are clamped to 1.
void set_threads(int n);
int get_threads();

/// Splits [0, count) into contiguous chunks and runs `chunk_fn(begin, end)`
/// on each, using up to get_threads() workers. Chunks are disjoint, so a
/// kernel that writes only inside its chunk needs no synchronization and
/// produces identical results for any worker count.
void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

}  // namespace ircnn
