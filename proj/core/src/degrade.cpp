// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ircnn/error.hpp"
#include "ircnn/rng.hpp"

namespace ircnn {

namespace {

// 5x7 raster, one byte per row, bit 4 = leftmost column.
constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

constexpr unsigned char kGlyphs[36][7] = {
    {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},  // A
    {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110},  // B
    {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110},  // C
    {0b11110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b11110},  // D
    {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111},  // E
    {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000},  // F
    {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111},  // G
    {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001},  // H
    {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},  // I
    {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100},  // J
    {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001},  // K
    {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111},  // L
    {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001},  // M
    {0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001, 0b10001},  // N
    {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110},  // O
    {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000},  // P
    {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101},  // Q
    {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001},  // R
    {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110},  // S
    {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100},  // T
    {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110},  // U
    {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100},  // V
    {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b11011, 0b10001},  // W
    {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001},  // X
    {0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100},  // Y
    {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111},  // Z
    {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},  // 0
    {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},  // 1
    {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},  // 2
    {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},  // 3
    {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},  // 4
    {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},  // 5
    {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},  // 6
    {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},  // 7
    {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},  // 8
    {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},  // 9
};

struct Style {
  int height;  // glyph pixel height
  int bold;    // extra dilation in pixels (0..2)
};

Style style_from_index(std::uint64_t idx) {
  return Style{kTextHeights[idx % 5], static_cast<int>(idx / 5)};
}

}  // namespace

std::string CorruptionSpec::describe() const {
  switch (kind) {
    case CorruptionKind::kGaussian:
      return "gaussian sigma=" + std::to_string(sigma);
    case CorruptionKind::kMissing:
      return "missing fraction=" + std::to_string(fraction);
    case CorruptionKind::kText:
      return "text px_per_string=" + std::to_string(text.px_per_string);
  }
  return "unknown";
}

Image corrupt_gaussian(const Image& img, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw UsageError("corrupt_gaussian: sigma must be >= 0");
  Image out = img;
  if (sigma == 0) return out;
  Rng rng(derive_seed(seed, 0x676175ull));  // "gau" stream
  for (auto& v : out.px) {
    v = static_cast<float>(static_cast<double>(v) + sigma * rng.normal());
  }
  return out;
}

Image corrupt_missing(const Image& img, double fraction, std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw UsageError("corrupt_missing: fraction must be in [0,1]");
  }
  Image out = img;
  const std::int64_t hw = img.h * img.w;
  const std::int64_t drop = std::llround(fraction * static_cast<double>(hw));
  if (drop == 0) return out;
  Rng rng(derive_seed(seed, 0x6d697373ull));  // "miss" stream
  std::vector<std::int64_t> idx(static_cast<std::size_t>(hw));
  for (std::int64_t c = 0; c < 3; ++c) {
    std::iota(idx.begin(), idx.end(), std::int64_t{0});
    // Partial Fisher-Yates: the first `drop` slots end up as a uniform
    // sample without replacement.
    for (std::int64_t i = 0; i < drop; ++i) {
      const std::int64_t j =
          i + static_cast<std::int64_t>(rng.uniform_below(
                  static_cast<std::uint64_t>(hw - i)));
      std::swap(idx[static_cast<std::size_t>(i)],
                idx[static_cast<std::size_t>(j)]);
    }
    for (std::int64_t i = 0; i < drop; ++i) {
      out.px[static_cast<std::size_t>(c * hw + idx[static_cast<std::size_t>(i)])] = 0.f;
    }
  }
  return out;
}

TextCorruption corrupt_text(const Image& img, const TextParams& params,
                            std::uint64_t seed) {
  if (img.h < 32 || img.w < 32) {
    throw DataError("corrupt_text: image must be at least 32x32, got " +
                    std::to_string(img.w) + "x" + std::to_string(img.h));
  }
  if (params.px_per_string <= 0) {
    throw UsageError("corrupt_text: px_per_string must be > 0");
  }
  TextCorruption result;
  result.image = img;
  result.mask.assign(static_cast<std::size_t>(img.h * img.w), 0);

  std::int64_t count = params.string_count;
  if (count < 0) {
    count = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(img.h * img.w) /
                        params.px_per_string));
  }
  result.strings = count;

  Rng rng(derive_seed(seed, 0x74657874ull));  // "text" stream
  for (std::int64_t s = 0; s < count; ++s) {
    const Style style = style_from_index(rng.uniform_below(kTextStyleCount));
    std::int64_t len = rng.uniform_int(2, 5);
    const float intensity = static_cast<float>(rng.uniform(0.0, 255.0));

    const double scl = static_cast<double>(style.height) / kGlyphH;
    const std::int64_t char_w = std::llround(kGlyphW * scl);
    const std::int64_t advance = std::llround((kGlyphW + 1) * scl);
    const std::int64_t box_h = style.height + style.bold;
    auto string_w = [&](std::int64_t l) {
      return advance * (l - 1) + char_w + style.bold;
    };
    while (len > 1 && string_w(len) > img.w) --len;
    if (string_w(len) > img.w || box_h > img.h) continue;  // style too tall/wide

    const std::int64_t y0 = rng.uniform_int(0, img.h - box_h);
    const std::int64_t x0 = rng.uniform_int(0, img.w - string_w(len));

    for (std::int64_t ci = 0; ci < len; ++ci) {
      const std::uint64_t g = rng.uniform_below(sizeof(kAlphabet) - 1);
      const unsigned char* rows = kGlyphs[g];
      const std::int64_t gx0 = x0 + ci * advance;
      for (std::int64_t yy = 0; yy < style.height; ++yy) {
        const auto src_y = static_cast<std::int64_t>(yy / scl);
        for (std::int64_t xx = 0; xx < char_w; ++xx) {
          const auto src_x = static_cast<std::int64_t>(xx / scl);
          if (src_y >= kGlyphH || src_x >= kGlyphW) continue;
          if (!(rows[src_y] >> (kGlyphW - 1 - src_x) & 1)) continue;
          for (std::int64_t dy = 0; dy <= style.bold; ++dy) {
            for (std::int64_t dx = 0; dx <= style.bold; ++dx) {
              const std::int64_t py = y0 + yy + dy;
              const std::int64_t px = gx0 + xx + dx;
              if (py >= img.h || px >= img.w) continue;
              result.image.at(0, py, px) = intensity;
              result.image.at(1, py, px) = intensity;
              result.image.at(2, py, px) = intensity;
              result.mask[static_cast<std::size_t>(py * img.w + px)] = 1;
            }
          }
        }
      }
    }
  }
  return result;
}

Image corrupt(const Image& img, const CorruptionSpec& spec) {
  switch (spec.kind) {
    case CorruptionKind::kGaussian:
      return corrupt_gaussian(img, spec.sigma, spec.seed);
    case CorruptionKind::kMissing:
      return corrupt_missing(img, spec.fraction, spec.seed);
    case CorruptionKind::kText:
      return corrupt_text(img, spec.text, spec.seed).image;
  }
  throw UsageError("corrupt: unknown corruption kind");
}

}  // namespace ircnn
