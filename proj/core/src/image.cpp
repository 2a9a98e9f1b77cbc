// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/image.hpp"

#include <cmath>
#include <fstream>
#include <vector>

namespace ircnn {

namespace {

// Consumes PPM header tokens: whitespace separated, '#' starts a comment
// that runs to end of line.
int next_header_token(std::istream& in, std::string& tok) {
  tok.clear();
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      if (!tok.empty()) return ch;
    } else {
      tok.push_back(static_cast<char>(ch));
    }
    ch = in.get();
  }
  return EOF;
}

std::int64_t parse_dim(const std::string& tok, const std::string& path) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ImageFormatError(ImageFormatError::Kind::kBadHeader,
                           "ppm: malformed header field '" + tok + "' in '" +
                               path + "'");
  }
  const std::int64_t v = std::stoll(tok);
  if (v <= 0 || v > 1 << 20) {
    throw ImageFormatError(ImageFormatError::Kind::kBadHeader,
                           "ppm: implausible dimension " + tok + " in '" +
                               path + "'");
  }
  return v;
}

}  // namespace

Image load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("ppm: cannot open '" + path + "'");

  std::string tok;
  if (next_header_token(in, tok) == EOF || tok.size() != 2 || tok[0] != 'P') {
    throw ImageFormatError(ImageFormatError::Kind::kBadHeader,
                           "ppm: missing magic in '" + path + "'");
  }
  if (tok != "P6") {
    throw ImageFormatError(ImageFormatError::Kind::kUnsupportedType,
                           "ppm: unsupported subtype '" + tok + "' in '" +
                               path + "' (only binary P6 is accepted)");
  }
  if (next_header_token(in, tok) == EOF) {
    throw ImageFormatError(ImageFormatError::Kind::kBadHeader,
                           "ppm: missing width in '" + path + "'");
  }
  const std::int64_t w = parse_dim(tok, path);
  if (next_header_token(in, tok) == EOF) {
    throw ImageFormatError(ImageFormatError::Kind::kBadHeader,
                           "ppm: missing height in '" + path + "'");
  }
  const std::int64_t h = parse_dim(tok, path);
  if (next_header_token(in, tok) == EOF) {
    throw ImageFormatError(ImageFormatError::Kind::kBadHeader,
                           "ppm: missing maxval in '" + path + "'");
  }
  if (tok != "255") {
    throw ImageFormatError(ImageFormatError::Kind::kBadMaxval,
                           "ppm: maxval must be 255, got '" + tok + "' in '" +
                               path + "'");
  }
  // The single whitespace byte after maxval was consumed by the tokenizer;
  // pixel data follows immediately.
  std::vector<unsigned char> raw(static_cast<std::size_t>(3 * h * w));
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw ImageFormatError(ImageFormatError::Kind::kTruncated,
                           "ppm: truncated payload in '" + path + "'");
  }

  Image img(h, w);
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      const std::size_t o = static_cast<std::size_t>(3 * (y * w + x));
      img.at(0, y, x) = static_cast<float>(raw[o]);
      img.at(1, y, x) = static_cast<float>(raw[o + 1]);
      img.at(2, y, x) = static_cast<float>(raw[o + 2]);
    }
  }
  return img;
}

void save_ppm(const Image& img, const std::string& path) {
  if (img.h < 1 || img.w < 1) throw UsageError("ppm: empty image");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("ppm: cannot write '" + path + "'");
  out << "P6\n" << img.w << " " << img.h << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(3 * img.h * img.w));
  for (std::int64_t y = 0; y < img.h; ++y) {
    for (std::int64_t x = 0; x < img.w; ++x) {
      for (std::int64_t c = 0; c < 3; ++c) {
        float v = img.at(c, y, x);
        v = v < 0.f ? 0.f : (v > 255.f ? 255.f : v);
        raw[static_cast<std::size_t>(3 * (y * img.w + x) + c)] =
            static_cast<unsigned char>(std::lround(v));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw DataError("ppm: short write to '" + path + "'");
}

Tensor normalize(const Image& img) {
  Tensor t(Shape{1, 3, img.h, img.w});
  for (std::int64_t i = 0; i < t.size(); ++i) {
    t[i] = img.px[static_cast<std::size_t>(i)] / 255.0f - 0.5f;
  }
  return t;
}

Image denormalize(const Tensor& t) {
  if (t.shape().n != 1 || t.shape().c != 3) {
    throw UsageError("denormalize: expected (1,3,H,W), got " +
                     t.shape().str());
  }
  Image img(t.shape().h, t.shape().w);
  for (std::int64_t i = 0; i < t.size(); ++i) {
    img.px[static_cast<std::size_t>(i)] = (t[i] + 0.5f) * 255.0f;
  }
  return img;
}

Tensor crop(const Tensor& t, std::int64_t y0, std::int64_t x0, std::int64_t h,
            std::int64_t w) {
  const Shape s = t.shape();
  if (s.n != 1) throw UsageError("crop: expected batch of 1");
  if (y0 < 0 || x0 < 0 || y0 + h > s.h || x0 + w > s.w) {
    throw UsageError("crop: window out of bounds");
  }
  Tensor out(Shape{1, s.c, h, w});
  for (std::int64_t c = 0; c < s.c; ++c) {
    for (std::int64_t y = 0; y < h; ++y) {
      const float* src = t.data() + (c * s.h + y0 + y) * s.w + x0;
      float* dst = out.data() + (c * h + y) * w;
      std::copy(src, src + w, dst);
    }
  }
  return out;
}

}  // namespace ircnn
