// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ircnn/error.hpp"
#include "ircnn/rng.hpp"

namespace ircnn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw DataError("manifest: bad numeric value '" + value + "' for key '" +
                    key + "'");
  }
}

}  // namespace

DatasetManifest DatasetManifest::parse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("manifest: cannot open '" + path + "'");
  const auto base = std::filesystem::path(path).parent_path();

  DatasetManifest m;
  bool kind_set = false;
  bool in_images = false;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[images]") {
      in_images = true;
      continue;
    }
    if (in_images) {
      std::filesystem::path p(line);
      if (p.is_relative()) p = base / p;
      m.images.push_back(p.string());
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("manifest: expected key = value at line " +
                      std::to_string(lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "corruption") {
      kind_set = true;
      if (value == "gaussian") {
        m.corruption.kind = CorruptionKind::kGaussian;
      } else if (value == "missing") {
        m.corruption.kind = CorruptionKind::kMissing;
      } else if (value == "text") {
        m.corruption.kind = CorruptionKind::kText;
      } else {
        throw DataError("manifest: unknown corruption '" + value + "'");
      }
    } else if (key == "sigma") {
      m.corruption.sigma = parse_number(key, value);
    } else if (key == "fraction") {
      m.corruption.fraction = parse_number(key, value);
    } else if (key == "px_per_string") {
      m.corruption.text.px_per_string = parse_number(key, value);
    } else if (key == "strings_per_image") {
      m.corruption.text.string_count =
          static_cast<std::int64_t>(parse_number(key, value));
    } else if (key == "patches_per_image") {
      m.patches_per_image = static_cast<std::int64_t>(parse_number(key, value));
    } else if (key == "seed") {
      m.seed = static_cast<std::uint64_t>(parse_number(key, value));
    } else {
      throw DataError("manifest: unknown key '" + key + "' at line " +
                      std::to_string(lineno));
    }
  }
  if (!kind_set) throw DataError("manifest: missing 'corruption' key");
  if (m.patches_per_image < 1) {
    throw DataError("manifest: patches_per_image must be >= 1");
  }
  if (m.images.empty()) throw DataError("manifest: no images listed");
  m.corruption.seed = m.seed;
  return m;
}

PatchDataset build_patch_dataset(const DatasetManifest& manifest) {
  PatchDataset ds;
  ds.pairs.reserve(static_cast<std::size_t>(
      static_cast<std::int64_t>(manifest.images.size()) *
      manifest.patches_per_image));
  for (std::size_t i = 0; i < manifest.images.size(); ++i) {
    Image clean;
    try {
      clean = load_ppm(manifest.images[i]);
    } catch (const Error& e) {
      std::cerr << "warning: skipping '" << manifest.images[i]
                << "': " << e.what() << "\n";
      ++ds.images_skipped;
      continue;
    }
    if (clean.h < kPatchSize || clean.w < kPatchSize) {
      std::cerr << "warning: skipping '" << manifest.images[i]
                << "': " << clean.w << "x" << clean.h
                << " is smaller than the patch size\n";
      ++ds.images_skipped;
      continue;
    }

    CorruptionSpec spec = manifest.corruption;
    spec.seed = derive_seed(manifest.seed, 2 * i);
    const Image noisy = corrupt(clean, spec);

    const Tensor clean_t = normalize(clean);
    const Tensor noisy_t = normalize(noisy);

    Rng patch_rng(derive_seed(manifest.seed, 2 * i + 1));
    for (std::int64_t p = 0; p < manifest.patches_per_image; ++p) {
      const std::int64_t y =
          patch_rng.uniform_int(0, clean.h - kPatchSize);
      const std::int64_t x =
          patch_rng.uniform_int(0, clean.w - kPatchSize);
      PatchPair pair;
      pair.clean = crop(clean_t, y, x, kPatchSize, kPatchSize);
      pair.noisy = crop(noisy_t, y, x, kPatchSize, kPatchSize);
      pair.source_index = static_cast<std::int64_t>(i);
      pair.y = y;
      pair.x = x;
      ds.pairs.push_back(std::move(pair));
    }
    ++ds.images_used;
  }
  return ds;
}

BatchIterator::BatchIterator(const PatchDataset& dataset,
                             std::int64_t batch_size, std::uint64_t epoch_seed)
    : dataset_(dataset), batch_size_(batch_size) {
  if (batch_size_ < 1) throw UsageError("batch iterator: batch size must be >= 1");
  if (dataset.pairs.empty()) throw DataError("batch iterator: empty dataset");
  order_.resize(dataset.pairs.size());
  for (std::size_t i = 0; i < order_.size(); ++i)
    order_[i] = static_cast<std::int64_t>(i);
  Rng rng(derive_seed(epoch_seed, 0x65706f6368ull));  // "epoch" stream
  for (std::size_t i = order_.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(order_[i - 1], order_[j]);
  }
}

std::int64_t BatchIterator::batches_per_epoch() const {
  const auto n = static_cast<std::int64_t>(order_.size());
  return (n + batch_size_ - 1) / batch_size_;
}

bool BatchIterator::next(Batch& out) {
  const auto total = static_cast<std::int64_t>(order_.size());
  if (cursor_ >= total) return false;
  const std::int64_t b = std::min(batch_size_, total - cursor_);
  out.clean = Tensor(Shape{b, 3, kPatchSize, kPatchSize});
  out.noisy = Tensor(Shape{b, 3, kPatchSize, kPatchSize});
  const std::int64_t stride = 3 * kPatchSize * kPatchSize;
  for (std::int64_t i = 0; i < b; ++i) {
    const PatchPair& pair =
        dataset_.pairs[static_cast<std::size_t>(order_[static_cast<std::size_t>(cursor_ + i)])];
    std::copy(pair.clean.data(), pair.clean.data() + stride,
              out.clean.data() + i * stride);
    std::copy(pair.noisy.data(), pair.noisy.data() + stride,
              out.noisy.data() + i * stride);
  }
  cursor_ += b;
  return true;
}

}  // namespace ircnn
