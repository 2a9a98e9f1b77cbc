// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ircnn/dataset.hpp"
#include "ircnn/degrade.hpp"
#include "ircnn/image.hpp"
#include "ircnn/model.hpp"

namespace ircnn {

struct TrainConfig {
  float learning_rate = 1e-4f;
  float momentum = 0.9f;
  std::int64_t batch_size = 256;
  std::int64_t epochs = 0;
  std::uint64_t seed = 0;
  std::int64_t checkpoint_interval = 0;  // iterations; 0 disables
  std::string checkpoint_path;
  std::string loss_log_path;  // per-batch CSV: iteration,loss
  std::ostream* progress = nullptr;  // per-epoch summary lines
};

struct TrainResult {
  std::vector<double> batch_losses;  // one entry per iteration
  std::int64_t iterations = 0;
};

/// Mini-batch momentum SGD against the MSE objective: forward, loss,
/// backward, update, epoch after epoch. Deterministic for a fixed seed in
/// single-threaded mode. A non-finite loss aborts with the last checkpoint
/// left on disk.
TrainResult train(IrcnnModel& model, const PatchDataset& dataset,
                  const TrainConfig& config);

/// Restores an image with one forward pass over the full (normalized) image.
Image restore_whole(const IrcnnModel& model, const Image& img);

/// Window start positions along one axis: the stride grid plus a final
/// position clamped to the border, so the windows cover every pixel.
std::vector<std::int64_t> sliding_grid(std::int64_t len, std::int64_t stride);

/// Patch-based restoration: 32x32 windows on a stride grid (final windows
/// clamped to the border), each window run through the model and overlapping
/// outputs averaged per pixel. Windows are evaluated with receptive-field
/// context around them (clamped to the image), so away from the image border
/// a window sees exactly what a whole-image pass would.
Image restore_sliding(const IrcnnModel& model, const Image& img,
                      std::int64_t stride);

/// 10*log10(255^2 / MSE) over all 3*H*W elements; +infinity for identical
/// images.
double psnr(const Image& a, const Image& b);

struct EvalReport {
  struct Row {
    std::string image;
    double corrupted_db = 0;
    double restored_db = 0;
    double seconds = 0;
  };
  std::vector<Row> rows;
  std::vector<std::string> failures;  // undecodable inputs, listed not fatal
  double mean_corrupted_db = 0;
  double mean_restored_db = 0;
  double seconds_total = 0;
  std::string config_echo;
};

/// Seed for (image, trial); exposed so single-trial runs can be reproduced.
std::uint64_t eval_trial_seed(std::uint64_t base, std::int64_t image_index,
                              std::int64_t trial);

/// For each image: corrupt with trial-indexed seeds, restore (sliding mode),
/// score PSNR against the clean original; per-image values are means over
/// the trials.
EvalReport evaluate(const IrcnnModel& model,
                    const std::vector<std::string>& image_paths,
                    const CorruptionSpec& spec, std::int64_t trials,
                    std::int64_t stride = 8);

std::string format_eval_table(const EvalReport& report);

/// Machine-readable rows: image, trial-mean corrupted dB, trial-mean
/// restored dB, plus a final mean row. Wall-clock timing stays in the table
/// output so repeated runs produce identical files.
void write_eval_csv(const EvalReport& report, const std::string& path);

}  // namespace ircnn
