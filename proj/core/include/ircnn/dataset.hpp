// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ircnn/degrade.hpp"
#include "ircnn/image.hpp"
#include "ircnn/tensor.hpp"

namespace ircnn {

inline constexpr std::int64_t kPatchSize = 32;

/// Aligned clean/corrupted training example: both tensors are (1,3,32,32),
/// normalized, taken from the same window of the same source image.
struct PatchPair {
  Tensor clean;
  Tensor noisy;
  std::int64_t source_index = 0;
  std::int64_t y = 0;
  std::int64_t x = 0;
};

/// Plain-text dataset description:
///   key = value lines (corruption, sigma, fraction, px_per_string,
///   patches_per_image, seed), '#' comments, then an "[images]" section with
///   one path per line (relative paths resolve against the manifest's
///   directory).
struct DatasetManifest {
  std::vector<std::string> images;
  CorruptionSpec corruption;
  std::int64_t patches_per_image = 16;
  std::uint64_t seed = 0;

  static DatasetManifest parse(const std::string& path);
};

struct PatchDataset {
  std::vector<PatchPair> pairs;
  std::int64_t images_used = 0;
  std::int64_t images_skipped = 0;  // undersized or undecodable, warned
};

/// Corrupts each listed image once (whole image, per-image derived seed),
/// then samples patches_per_image windows at per-image random offsets, the
/// same offsets on the clean and corrupted copy. Deterministic under the
/// manifest seed. Undersized images are skipped with a warning to stderr.
PatchDataset build_patch_dataset(const DatasetManifest& manifest);

/// Reshuffles pair order from a per-epoch seed and serves (clean, noisy)
/// batches of shape (B,3,32,32); the final short batch is served too.
class BatchIterator {
 public:
  BatchIterator(const PatchDataset& dataset, std::int64_t batch_size,
                std::uint64_t epoch_seed);

  struct Batch {
    Tensor clean;
    Tensor noisy;
  };

  /// Returns false when the epoch is exhausted.
  bool next(Batch& out);

  std::int64_t batches_per_epoch() const;

 private:
  const PatchDataset& dataset_;
  std::int64_t batch_size_;
  std::vector<std::int64_t> order_;
  std::int64_t cursor_ = 0;
};

}  // namespace ircnn
