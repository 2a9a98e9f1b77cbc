// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ircnn/image.hpp"

namespace ircnn {

enum class CorruptionKind { kGaussian, kMissing, kText };

/// Parameters of the synthetic text overlay. Glyphs come from a built-in
/// 5x7 raster (A-Z, 0-9), nearest-neighbor upscaled; a style is one of 15
/// combinations of 5 glyph heights spanning 15..25 px and 3 boldness levels
/// (0-2 px dilation). Each string gets a random style, length, position and
/// gray intensity.
struct TextParams {
  double px_per_string = 2500.0;   // one string per this many image pixels
  std::int64_t string_count = -1;  // >= 0 overrides the density-derived count
};

inline constexpr int kTextStyleCount = 15;
inline constexpr int kTextHeights[5] = {15, 17, 20, 22, 25};

/// Tagged description of one degradation, seed included, so a corruption is
/// reproducible from the spec alone.
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussian;
  double sigma = 25.0;        // gaussian: stddev in 8-bit intensity units
  double fraction = 0.8;      // missing: zeroed share per channel
  TextParams text;            // text overlay
  std::uint64_t seed = 0;

  std::string describe() const;
};

/// Adds i.i.d. Normal(0, sigma^2) to every element (Box-Muller from the
/// seeded stream). Values stay real and unclipped.
Image corrupt_gaussian(const Image& img, double sigma, std::uint64_t seed);

/// Zeroes exactly llround(fraction*H*W) positions per channel, chosen
/// uniformly without replacement (independently per channel). Everything
/// else is untouched.
Image corrupt_missing(const Image& img, double fraction, std::uint64_t seed);

struct TextCorruption {
  Image image;
  std::vector<std::uint8_t> mask;  // h*w, 1 where a glyph pixel was painted
  std::int64_t strings = 0;
};

/// Overwrites the image with random alphanumeric strings. Glyph pixels get
/// the string's gray intensity on all three channels; other pixels are
/// bit-identical to the input. Requires at least a 32x32 image.
TextCorruption corrupt_text(const Image& img, const TextParams& params,
                            std::uint64_t seed);

/// Dispatch on spec.kind using spec.seed.
Image corrupt(const Image& img, const CorruptionSpec& spec);

}  // namespace ircnn
