// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ircnn/tensor.hpp"

namespace ircnn {

/// An RGB image in the [0,255] real domain, three planar channels (R, G, B)
/// stored row-major. Values may leave [0,255] (e.g. unclipped noise);
/// clipping happens only on 8-bit export.
struct Image {
  std::int64_t h = 0;
  std::int64_t w = 0;
  std::vector<float> px;  // 3 * h * w

  Image() = default;
  Image(std::int64_t height, std::int64_t width, float fill = 0.f)
      : h(height), w(width),
        px(static_cast<std::size_t>(3 * height * width), fill) {}

  std::int64_t index(std::int64_t c, std::int64_t y, std::int64_t x) const {
    return (c * h + y) * w + x;
  }
  float& at(std::int64_t c, std::int64_t y, std::int64_t x) {
    return px[static_cast<std::size_t>(index(c, y, x))];
  }
  float at(std::int64_t c, std::int64_t y, std::int64_t x) const {
    return px[static_cast<std::size_t>(index(c, y, x))];
  }
  std::int64_t size() const { return static_cast<std::int64_t>(px.size()); }
};

/// Reads a binary PPM (P6, maxval 255). Distinct failures for a malformed
/// header, an unsupported subtype (e.g. P5), a maxval other than 255, and a
/// truncated payload.
Image load_ppm(const std::string& path);

/// Clips to [0,255], rounds half away from zero, writes P6.
void save_ppm(const Image& img, const std::string& path);

/// Maps [0,255] to roughly [-0.5, 0.5]: x/255 - 0.5. Fixed affine map, no
/// dataset statistics involved.
Tensor normalize(const Image& img);

/// Exact inverse of normalize (before any clipping).
Image denormalize(const Tensor& t);

/// Copies a window of a (1,3,H,W) tensor; the window must lie inside.
Tensor crop(const Tensor& t, std::int64_t y0, std::int64_t x0, std::int64_t h,
            std::int64_t w);

}  // namespace ircnn
