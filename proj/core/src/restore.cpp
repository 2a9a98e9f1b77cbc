// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/restore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "ircnn/error.hpp"
#include "ircnn/nn.hpp"
#include "ircnn/rng.hpp"

namespace ircnn {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string format_db(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::vector<std::int64_t> sliding_grid(std::int64_t len, std::int64_t stride) {
  std::vector<std::int64_t> v;
  for (std::int64_t p = 0; p + kPatchSize < len; p += stride) v.push_back(p);
  v.push_back(len - kPatchSize);  // clamped final window; total coverage
  return v;
}

TrainResult train(IrcnnModel& model, const PatchDataset& dataset,
                  const TrainConfig& config) {
  validate_architecture(model);
  if (config.epochs < 0) throw UsageError("train: epochs must be >= 0");
  TrainResult result;
  if (config.epochs == 0) return result;
  if (dataset.pairs.empty()) throw DataError("train: empty dataset");

  auto state = OptimizerState::make(model.layers, config.learning_rate,
                                    config.momentum);
  std::ofstream log;
  if (!config.loss_log_path.empty()) {
    log.open(config.loss_log_path, std::ios::trunc);
    if (!log) {
      throw DataError("train: cannot write loss log '" +
                      config.loss_log_path + "'");
    }
    log << "iteration,loss\n";
  }

  std::int64_t iteration = 0;
  ForwardCache cache;
  for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    BatchIterator it(dataset, config.batch_size,
                     derive_seed(config.seed, static_cast<std::uint64_t>(epoch)));
    BatchIterator::Batch batch;
    double epoch_loss = 0;
    std::int64_t epoch_batches = 0;
    while (it.next(batch)) {
      const Tensor out = model_forward_cached(model, batch.noisy, cache);
      MseResult mse = mse_loss(out, batch.clean);
      ++iteration;
      if (!std::isfinite(mse.loss)) {
        if (log.is_open()) log.flush();
        throw NumericError("train: non-finite loss at iteration " +
                           std::to_string(iteration) +
                           (config.checkpoint_path.empty()
                                ? ""
                                : "; last checkpoint kept at '" +
                                      config.checkpoint_path + "'"));
      }
      const ModelGrads grads = model_backward(model, cache, mse.grad);
      sgd_momentum_step(model.layers, grads.layer, state);

      result.batch_losses.push_back(mse.loss);
      epoch_loss += mse.loss;
      ++epoch_batches;
      if (log.is_open()) {
        char line[64];
        std::snprintf(line, sizeof(line), "%lld,%.9e\n",
                      static_cast<long long>(iteration), mse.loss);
        log << line;
      }
      if (config.checkpoint_interval > 0 && !config.checkpoint_path.empty() &&
          iteration % config.checkpoint_interval == 0) {
        model_save(model, config.checkpoint_path);
      }
    }
    if (config.progress != nullptr && epoch_batches > 0) {
      *config.progress << "epoch " << (epoch + 1) << "/" << config.epochs
                       << " mean_loss=" << (epoch_loss / epoch_batches)
                       << " iterations=" << iteration << "\n";
      config.progress->flush();
    }
  }
  result.iterations = iteration;
  return result;
}

Image restore_whole(const IrcnnModel& model, const Image& img) {
  validate_architecture(model);
  if (img.h < 5 || img.w < 5) {
    throw DataError("restore: whole-image mode needs at least 5x5, got " +
                    std::to_string(img.w) + "x" + std::to_string(img.h));
  }
  const Tensor out = model_forward(model, normalize(img));
  return denormalize(out);
}

Image restore_sliding(const IrcnnModel& model, const Image& img,
                      std::int64_t stride) {
  validate_architecture(model);
  if (stride < 1 || stride > kPatchSize) {
    throw UsageError("restore: stride must be in [1, 32], got " +
                     std::to_string(stride));
  }
  if (img.h < kPatchSize || img.w < kPatchSize) {
    throw DataError(
        "restore: image smaller than the 32x32 window (" +
        std::to_string(img.w) + "x" + std::to_string(img.h) +
        "); use whole-image mode");
  }

  const Tensor full = normalize(img);
  const std::int64_t halo = model.receptive_radius();
  Tensor accum(Shape{1, 3, img.h, img.w});
  std::vector<float> hits(static_cast<std::size_t>(img.h * img.w), 0.f);

  const auto ys = sliding_grid(img.h, stride);
  const auto xs = sliding_grid(img.w, stride);
  for (const std::int64_t wy : ys) {
    for (const std::int64_t wx : xs) {
      const std::int64_t cy0 = std::max<std::int64_t>(0, wy - halo);
      const std::int64_t cx0 = std::max<std::int64_t>(0, wx - halo);
      const std::int64_t cy1 = std::min(img.h, wy + kPatchSize + halo);
      const std::int64_t cx1 = std::min(img.w, wx + kPatchSize + halo);
      const Tensor context = crop(full, cy0, cx0, cy1 - cy0, cx1 - cx0);
      const Tensor out = model_forward(model, context);
      const std::int64_t oy = wy - cy0;
      const std::int64_t ox = wx - cx0;
      for (std::int64_t c = 0; c < 3; ++c) {
        for (std::int64_t y = 0; y < kPatchSize; ++y) {
          const float* src =
              out.data() + (c * out.shape().h + oy + y) * out.shape().w + ox;
          float* dst = accum.data() + (c * img.h + wy + y) * img.w + wx;
          for (std::int64_t x = 0; x < kPatchSize; ++x) dst[x] += src[x];
        }
      }
      for (std::int64_t y = 0; y < kPatchSize; ++y) {
        float* hrow = hits.data() + (wy + y) * img.w + wx;
        for (std::int64_t x = 0; x < kPatchSize; ++x) hrow[x] += 1.f;
      }
    }
  }

  for (std::int64_t c = 0; c < 3; ++c) {
    for (std::int64_t i = 0; i < img.h * img.w; ++i) {
      accum.data()[c * img.h * img.w + i] /= hits[static_cast<std::size_t>(i)];
    }
  }
  return denormalize(accum);
}

double psnr(const Image& a, const Image& b) {
  if (a.h != b.h || a.w != b.w) {
    throw DataError("psnr: image sizes differ (" + std::to_string(a.w) + "x" +
                    std::to_string(a.h) + " vs " + std::to_string(b.w) + "x" +
                    std::to_string(b.h) + ")");
  }
  double acc = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.px[static_cast<std::size_t>(i)]) -
                     static_cast<double>(b.px[static_cast<std::size_t>(i)]);
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::uint64_t eval_trial_seed(std::uint64_t base, std::int64_t image_index,
                              std::int64_t trial) {
  return derive_seed(derive_seed(base, 0x6576616cull + static_cast<std::uint64_t>(image_index)),
                     static_cast<std::uint64_t>(trial));
}

EvalReport evaluate(const IrcnnModel& model,
                    const std::vector<std::string>& image_paths,
                    const CorruptionSpec& spec, std::int64_t trials,
                    std::int64_t stride) {
  if (trials < 1) throw UsageError("evaluate: trials must be >= 1");
  EvalReport report;
  report.config_echo = spec.describe() + " trials=" + std::to_string(trials) +
                       " stride=" + std::to_string(stride);
  const double t_start = now_seconds();
  for (std::size_t i = 0; i < image_paths.size(); ++i) {
    Image clean;
    try {
      clean = load_ppm(image_paths[i]);
    } catch (const Error& e) {
      report.failures.push_back(image_paths[i] + ": " + e.what());
      continue;
    }
    EvalReport::Row row;
    row.image = image_paths[i];
    const double row_start = now_seconds();
    double corrupted_sum = 0, restored_sum = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      CorruptionSpec trial_spec = spec;
      trial_spec.seed =
          eval_trial_seed(spec.seed, static_cast<std::int64_t>(i), t);
      const Image noisy = corrupt(clean, trial_spec);
      const Image restored = clean.h >= kPatchSize && clean.w >= kPatchSize
                                 ? restore_sliding(model, noisy, stride)
                                 : restore_whole(model, noisy);
      corrupted_sum += psnr(noisy, clean);
      restored_sum += psnr(restored, clean);
    }
    row.corrupted_db = corrupted_sum / static_cast<double>(trials);
    row.restored_db = restored_sum / static_cast<double>(trials);
    row.seconds = now_seconds() - row_start;
    report.rows.push_back(row);
  }
  report.seconds_total = now_seconds() - t_start;
  if (report.rows.empty()) {
    throw DataError("evaluate: no image could be decoded");
  }
  double mc = 0, mr = 0;
  for (const auto& r : report.rows) {
    mc += r.corrupted_db;
    mr += r.restored_db;
  }
  report.mean_corrupted_db = mc / static_cast<double>(report.rows.size());
  report.mean_restored_db = mr / static_cast<double>(report.rows.size());
  return report;
}

std::string format_eval_table(const EvalReport& report) {
  std::string out;
  out += "config: " + report.config_echo + "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-40s %14s %14s %10s\n", "image",
                "corrupted dB", "restored dB", "seconds");
  out += line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof(line), "%-40s %14s %14s %10.2f\n",
                  r.image.c_str(), format_db(r.corrupted_db).c_str(),
                  format_db(r.restored_db).c_str(), r.seconds);
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-40s %14s %14s %10.2f\n", "mean",
                format_db(report.mean_corrupted_db).c_str(),
                format_db(report.mean_restored_db).c_str(),
                report.seconds_total);
  out += line;
  for (const auto& f : report.failures) out += "failed: " + f + "\n";
  return out;
}

void write_eval_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("eval: cannot write CSV '" + path + "'");
  out << "image,corrupted_db,restored_db\n";
  for (const auto& r : report.rows) {
    out << r.image << "," << format_db(r.corrupted_db) << ","
        << format_db(r.restored_db) << "\n";
  }
  out << "mean," << format_db(report.mean_corrupted_db) << ","
      << format_db(report.mean_restored_db) << "\n";
}

}  // namespace ircnn
