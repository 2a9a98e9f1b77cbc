// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "ircnn/model.hpp"

namespace ircnn {

namespace {

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  buf.push_back(static_cast<unsigned char>(v & 0xff));
  buf.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  buf.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  buf.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_f32(std::vector<unsigned char>& buf, float v) {
  static_assert(sizeof(float) == 4);
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(buf, bits);
}

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw DataError("model: cannot open '" + path + "'");
  }

  std::uint32_t u32() {
    unsigned char b[4];
    read(b, 4);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }

  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  void read(unsigned char* dst, std::size_t count) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in_.gcount()) != count) {
      throw ModelFormatError(ModelFormatError::Kind::kTruncated,
                             "model: file truncated");
    }
  }

  bool at_eof() {
    return in_.peek() == std::ifstream::traits_type::eof();
  }

 private:
  std::ifstream in_;
};

}  // namespace

void model_save(const IrcnnModel& m, const std::string& path) {
  validate_architecture(m);
  std::vector<unsigned char> buf;
  buf.reserve(static_cast<std::size_t>(12 + m.parameter_count() * 4 +
                                       static_cast<std::int64_t>(m.layers.size()) * 16));
  buf.insert(buf.end(), {'I', 'R', 'C', 'N'});
  put_u32(buf, kModelFormatVersion);
  put_u32(buf, static_cast<std::uint32_t>(m.layers.size()));
  for (const auto& layer : m.layers) {
    put_u32(buf, static_cast<std::uint32_t>(layer.in_channels()));
    put_u32(buf, static_cast<std::uint32_t>(layer.out_channels()));
    put_u32(buf, static_cast<std::uint32_t>(layer.kernel()));
    put_u32(buf, static_cast<std::uint32_t>(layer.kernel()));
    for (std::int64_t i = 0; i < layer.weights.size(); ++i)
      put_f32(buf, layer.weights[i]);
    for (const float b : layer.biases) put_f32(buf, b);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("model: cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("model: short write to '" + path + "'");
}

IrcnnModel model_load(const std::string& path) {
  Reader r(path);
  unsigned char magic[4];
  r.read(magic, 4);
  if (std::memcmp(magic, "IRCN", 4) != 0) {
    throw ModelFormatError(ModelFormatError::Kind::kBadMagic,
                           "model: bad magic in '" + path + "'");
  }
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw ModelFormatError(ModelFormatError::Kind::kBadVersion,
                           "model: unsupported format version " +
                               std::to_string(version));
  }
  const std::uint32_t layer_count = r.u32();
  if (layer_count == 0 || layer_count > 64) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeChain,
                           "model: implausible layer count " +
                               std::to_string(layer_count));
  }
  IrcnnModel m;
  for (std::uint32_t li = 0; li < layer_count; ++li) {
    const std::uint32_t in_c = r.u32();
    const std::uint32_t out_c = r.u32();
    const std::uint32_t kh = r.u32();
    const std::uint32_t kw = r.u32();
    if (in_c == 0 || out_c == 0 || kh == 0 || kh != kw || kh % 2 == 0 ||
        in_c > 4096 || out_c > 4096 || kh > 63) {
      throw ModelFormatError(ModelFormatError::Kind::kShapeChain,
                             "model: invalid layer record " +
                                 std::to_string(li + 1));
    }
    auto layer = make_conv_layer<float>(out_c, in_c, kh);
    for (std::int64_t i = 0; i < layer.weights.size(); ++i)
      layer.weights[i] = r.f32();
    for (auto& b : layer.biases) b = r.f32();
    m.layers.push_back(std::move(layer));
  }
  if (!r.at_eof()) {
    throw ModelFormatError(ModelFormatError::Kind::kTrailingBytes,
                           "model: trailing bytes after last layer");
  }
  validate_architecture(m);
  for (const auto& layer : m.layers) {
    layer.weights.require_finite("model weights");
    for (const float b : layer.biases) {
      if (!std::isfinite(b)) throw NumericError("model: non-finite bias");
    }
  }
  return m;
}

}  // namespace ircnn
