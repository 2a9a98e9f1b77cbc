// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "ircnn/image.hpp"

namespace ircnn {

/// Deterministic piecewise-smooth test image: gradient background, a handful
/// of soft-edged ellipses and rectangles, mild sinusoidal texture. Used by
/// the test fixtures and the sample-data tool; not part of the restoration
/// pipeline itself.
Image make_synthetic_image(std::int64_t h, std::int64_t w, std::uint64_t seed);

}  // namespace ircnn
