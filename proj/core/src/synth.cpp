// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ircnn/rng.hpp"

namespace ircnn {

Image make_synthetic_image(std::int64_t h, std::int64_t w, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x73796e7468ull));  // "synth" stream
  Image img(h, w);
  const double tau = 2.0 * std::numbers::pi;

  double base[3], gx[3], gy[3], wamp[3], wfx, wfy, wphase;
  for (int c = 0; c < 3; ++c) base[c] = rng.uniform(70.0, 180.0);
  for (int c = 0; c < 3; ++c) gx[c] = rng.uniform(-55.0, 55.0) / std::max<std::int64_t>(1, w);
  for (int c = 0; c < 3; ++c) gy[c] = rng.uniform(-55.0, 55.0) / std::max<std::int64_t>(1, h);
  for (int c = 0; c < 3; ++c) wamp[c] = rng.uniform(4.0, 18.0);
  wfx = rng.uniform(0.5, 2.0) / static_cast<double>(w);
  wfy = rng.uniform(0.5, 2.0) / static_cast<double>(h);
  wphase = rng.uniform(0.0, tau);

  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const double s = std::sin(tau * (wfx * x + wfy * y) + wphase);
      for (int c = 0; c < 3; ++c) {
        img.at(c, y, x) = static_cast<float>(base[c] + gx[c] * (x - w / 2.0) +
                                             gy[c] * (y - h / 2.0) +
                                             wamp[c] * s);
      }
    }
  }

  const std::int64_t shapes = 6 + static_cast<std::int64_t>(rng.uniform_below(6));
  for (std::int64_t s = 0; s < shapes; ++s) {
    const bool ellipse = rng.uniform01() < 0.6;
    const double cy = rng.uniform(0.0, static_cast<double>(h));
    const double cx = rng.uniform(0.0, static_cast<double>(w));
    const double ry = rng.uniform(h / 14.0, h / 3.5);
    const double rx = rng.uniform(w / 14.0, w / 3.5);
    const double edge = rng.uniform(1.0, 3.0);  // soft-edge width, px
    const double opacity = rng.uniform(0.65, 1.0);
    double color[3];
    for (int c = 0; c < 3; ++c) color[c] = rng.uniform(25.0, 230.0);

    const std::int64_t y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(cy - ry - edge - 1));
    const std::int64_t y1 = std::min(h, static_cast<std::int64_t>(cy + ry + edge + 2));
    const std::int64_t x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(cx - rx - edge - 1));
    const std::int64_t x1 = std::min(w, static_cast<std::int64_t>(cx + rx + edge + 2));
    for (std::int64_t y = y0; y < y1; ++y) {
      for (std::int64_t x = x0; x < x1; ++x) {
        double cover;
        if (ellipse) {
          const double dy = (y - cy) / ry, dx = (x - cx) / rx;
          const double d = std::sqrt(dy * dy + dx * dx);
          cover = std::clamp((1.0 - d) * ry / edge, 0.0, 1.0);
        } else {
          const double dy = ry - std::abs(y - cy);
          const double dx = rx - std::abs(x - cx);
          cover = std::clamp(std::min(dy, dx) / edge, 0.0, 1.0);
        }
        if (cover <= 0) continue;
        const double a = cover * opacity;
        for (int c = 0; c < 3; ++c) {
          img.at(c, y, x) = static_cast<float>((1.0 - a) * img.at(c, y, x) +
                                               a * color[c]);
        }
      }
    }
  }

  // fine texture so restoration has real detail to preserve
  const double tamp = rng.uniform(2.0, 7.0);
  const double tf1 = rng.uniform(1.0 / 16.0, 1.0 / 6.0);
  const double tf2 = rng.uniform(1.0 / 16.0, 1.0 / 6.0);
  const double tph = rng.uniform(0.0, tau);
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const double t = tamp * std::sin(tau * (tf1 * x + tf2 * y) + tph) *
                       std::cos(tau * (tf2 * x - tf1 * y));
      for (int c = 0; c < 3; ++c) {
        img.at(c, y, x) = std::clamp(img.at(c, y, x) + static_cast<float>(t),
                                     5.f, 250.f);
      }
    }
  }
  return img;
}

}  // namespace ircnn
