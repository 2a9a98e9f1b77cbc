// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: corrupt | train | restore | eval | gradcheck |
// inspect. Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
// failure. Every run prints its resolved configuration before acting.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ircnn/dataset.hpp"
#include "ircnn/degrade.hpp"
#include "ircnn/error.hpp"
#include "ircnn/gradcheck.hpp"
#include "ircnn/image.hpp"
#include "ircnn/model.hpp"
#include "ircnn/nn.hpp"
#include "ircnn/parallel.hpp"
#include "ircnn/restore.hpp"
#include "ircnn/rng.hpp"

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::array<std::int64_t, 5> parse_widths(const std::string& spec) {
  std::array<std::int64_t, 5> widths{};
  std::size_t pos = 0;
  for (int i = 0; i < 5; ++i) {
    const std::size_t comma = spec.find(',', pos);
    const std::string tok = comma == std::string::npos
                                ? spec.substr(pos)
                                : spec.substr(pos, comma - pos);
    try {
      widths[static_cast<std::size_t>(i)] = std::stoll(tok);
    } catch (const std::exception&) {
      throw ircnn::UsageError("--widths: expected 5 comma-separated counts, got '" +
                              spec + "'");
    }
    if (widths[static_cast<std::size_t>(i)] < 1) {
      throw ircnn::UsageError("--widths: counts must be >= 1");
    }
    if (comma == std::string::npos) {
      if (i != 4) {
        throw ircnn::UsageError("--widths: expected 5 counts, got '" + spec + "'");
      }
      pos = spec.size();
    } else {
      pos = comma + 1;
    }
  }
  if (pos != spec.size()) {
    throw ircnn::UsageError("--widths: expected 5 counts, got '" + spec + "'");
  }
  return widths;
}

ircnn::CorruptionSpec make_spec(const std::string& kind, double sigma,
                                double fraction, double text_density,
                                std::int64_t strings, std::uint64_t seed) {
  ircnn::CorruptionSpec spec;
  if (kind == "gaussian") {
    spec.kind = ircnn::CorruptionKind::kGaussian;
  } else if (kind == "missing") {
    spec.kind = ircnn::CorruptionKind::kMissing;
  } else if (kind == "text") {
    spec.kind = ircnn::CorruptionKind::kText;
  } else {
    throw ircnn::UsageError("--kind must be gaussian, missing or text");
  }
  spec.sigma = sigma;
  spec.fraction = fraction;
  spec.text.px_per_string = text_density;
  spec.text.string_count = strings;
  spec.seed = seed;
  return spec;
}

struct CorruptArgs {
  std::string in, out, kind;
  double sigma = 25.0;
  double fraction = 0.8;
  double text_density = 2500.0;
  std::int64_t strings = -1;
  std::uint64_t seed = 0;
};

int run_corrupt(const CorruptArgs& a) {
  std::cout << "config: in=" << a.in << " out=" << a.out << " kind=" << a.kind
            << " sigma=" << a.sigma << " fraction=" << a.fraction
            << " text-density=" << a.text_density << " strings=" << a.strings
            << " seed=" << a.seed << "\n";
  const ircnn::Image img = ircnn::load_ppm(a.in);
  const ircnn::CorruptionSpec spec =
      make_spec(a.kind, a.sigma, a.fraction, a.text_density, a.strings, a.seed);
  const ircnn::Image noisy = ircnn::corrupt(img, spec);
  const double db = ircnn::psnr(noisy, img);
  std::printf("psnr_vs_input_db=%s\n",
              std::isinf(db) ? "inf" : std::to_string(db).c_str());
  ircnn::save_ppm(noisy, a.out);
  return 0;
}

struct TrainArgs {
  std::string manifest;
  std::string widths = "64,64,64,64,64";
  double lr = 1e-4;
  double momentum = 0.9;
  std::int64_t batch = 256;
  std::int64_t epochs = 30;
  std::uint64_t seed = 0;
  std::int64_t data_seed = -1;  // < 0: use the manifest's seed
  std::string out_model;
  std::string log;
  std::string resume;
  std::int64_t checkpoint_interval = 0;
  std::string checkpoint_path;
};

int run_train(const TrainArgs& a) {
  ircnn::DatasetManifest manifest = ircnn::DatasetManifest::parse(a.manifest);
  if (a.data_seed >= 0) {
    manifest.seed = static_cast<std::uint64_t>(a.data_seed);
    manifest.corruption.seed = manifest.seed;
  }
  const std::string ckpt =
      a.checkpoint_path.empty() ? a.out_model + ".ckpt" : a.checkpoint_path;
  std::cout << "config: manifest=" << a.manifest << " widths=" << a.widths
            << " lr=" << a.lr << " momentum=" << a.momentum
            << " batch=" << a.batch << " epochs=" << a.epochs
            << " seed=" << a.seed << " data-seed=" << manifest.seed
            << " out-model=" << a.out_model << " log=" << a.log
            << " resume=" << a.resume
            << " checkpoint-interval=" << a.checkpoint_interval
            << " checkpoint-path=" << ckpt
            << " corruption=" << manifest.corruption.describe()
            << " patches-per-image=" << manifest.patches_per_image
            << " images=" << manifest.images.size()
            << " threads=" << ircnn::get_threads() << "\n";

  const ircnn::PatchDataset dataset = ircnn::build_patch_dataset(manifest);
  std::cout << "dataset: " << dataset.pairs.size() << " patch pairs from "
            << dataset.images_used << " images (" << dataset.images_skipped
            << " skipped)\n";

  ircnn::IrcnnModel model =
      a.resume.empty() ? ircnn::model_init(parse_widths(a.widths), a.seed)
                       : ircnn::model_load(a.resume);

  ircnn::TrainConfig config;
  config.learning_rate = static_cast<float>(a.lr);
  config.momentum = static_cast<float>(a.momentum);
  config.batch_size = a.batch;
  config.epochs = a.epochs;
  config.seed = a.seed;
  config.checkpoint_interval = a.checkpoint_interval;
  config.checkpoint_path = ckpt;
  config.loss_log_path = a.log;
  config.progress = &std::cout;

  const double t0 = now_seconds();
  const ircnn::TrainResult result = ircnn::train(model, dataset, config);
  ircnn::model_save(model, a.out_model);
  std::printf("trained %lld iterations in %.2f s; model written to %s\n",
              static_cast<long long>(result.iterations), now_seconds() - t0,
              a.out_model.c_str());
  return 0;
}

struct RestoreArgs {
  std::string model, in, out;
  std::string mode = "sliding";
  std::int64_t stride = 8;
};

int run_restore(const RestoreArgs& a) {
  if (a.mode != "sliding" && a.mode != "whole") {
    throw ircnn::UsageError("--mode must be sliding or whole");
  }
  if (a.stride < 1 || a.stride > 32) {
    throw ircnn::UsageError("--stride must be in [1, 32]");
  }
  std::cout << "config: model=" << a.model << " in=" << a.in
            << " out=" << a.out << " mode=" << a.mode
            << " stride=" << a.stride << " threads=" << ircnn::get_threads()
            << "\n";
  const ircnn::IrcnnModel model = ircnn::model_load(a.model);
  const ircnn::Image img = ircnn::load_ppm(a.in);
  const double t0 = now_seconds();
  const ircnn::Image restored = a.mode == "whole"
                                    ? ircnn::restore_whole(model, img)
                                    : ircnn::restore_sliding(model, img, a.stride);
  std::printf("restored in %.3f s\n", now_seconds() - t0);
  ircnn::save_ppm(restored, a.out);
  return 0;
}

struct EvalArgs {
  std::string model, dir, csv;
  std::string kind = "gaussian";
  double sigma = 25.0;
  double fraction = 0.8;
  double text_density = 2500.0;
  std::int64_t strings = -1;
  std::int64_t trials = 1;
  std::int64_t stride = 8;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& a) {
  if (a.stride < 1 || a.stride > 32) {
    throw ircnn::UsageError("--stride must be in [1, 32]");
  }
  std::cout << "config: model=" << a.model << " dir=" << a.dir
            << " kind=" << a.kind << " sigma=" << a.sigma
            << " fraction=" << a.fraction << " text-density=" << a.text_density
            << " strings=" << a.strings << " trials=" << a.trials
            << " stride=" << a.stride << " seed=" << a.seed
            << " csv=" << a.csv << " threads=" << ircnn::get_threads() << "\n";
  const ircnn::IrcnnModel model = ircnn::model_load(a.model);

  std::vector<std::string> paths;
  if (!std::filesystem::is_directory(a.dir)) {
    throw ircnn::DataError("eval: '" + a.dir + "' is not a directory");
  }
  for (const auto& entry : std::filesystem::directory_iterator(a.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw ircnn::DataError("eval: no .ppm images in '" + a.dir + "'");
  }

  const ircnn::CorruptionSpec spec =
      make_spec(a.kind, a.sigma, a.fraction, a.text_density, a.strings, a.seed);
  const ircnn::EvalReport report =
      ircnn::evaluate(model, paths, spec, a.trials, a.stride);
  std::cout << ircnn::format_eval_table(report);
  if (!a.csv.empty()) ircnn::write_eval_csv(report, a.csv);
  return 0;
}

struct GradcheckArgs {
  std::string widths = "8,8,8,8,8";
  std::int64_t size = 8;
  std::int64_t samples = 200;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
};

int run_gradcheck(const GradcheckArgs& a) {
  if (a.size < 1) throw ircnn::UsageError("--size must be >= 1");
  if (a.samples < 1) throw ircnn::UsageError("--samples must be >= 1");
  std::cout << "config: widths=" << a.widths << " size=" << a.size
            << " samples=" << a.samples << " tolerance=" << a.tolerance
            << " seed=" << a.seed << "\n";
  const ircnn::IrcnnModel64 model =
      ircnn::to_double(ircnn::model_init(parse_widths(a.widths), a.seed));
  ircnn::Rng rng(ircnn::derive_seed(a.seed, 0x696e707574ull));
  ircnn::Tensor64 input(ircnn::Shape{1, 3, a.size, a.size});
  ircnn::Tensor64 target(ircnn::Shape{1, 3, a.size, a.size});
  for (std::int64_t i = 0; i < input.size(); ++i)
    input[i] = rng.uniform(-0.5, 0.5);
  for (std::int64_t i = 0; i < target.size(); ++i)
    target[i] = rng.uniform(-0.5, 0.5);
  const ircnn::GradCheckReport report = ircnn::gradient_check(
      model, input, target, a.samples, a.tolerance, a.seed);
  std::cout << report.summary() << "\n";
  if (!report.pass) {
    throw ircnn::NumericError("gradient check failed: " + report.summary());
  }
  return 0;
}

int run_inspect(const std::string& path) {
  std::cout << "config: model=" << path << "\n";
  const ircnn::IrcnnModel model = ircnn::model_load(path);
  std::cout << "format_version=" << ircnn::kModelFormatVersion << "\n";
  std::cout << "layers=" << model.layers.size() << "\n";
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const auto& l = model.layers[i];
    double wmin = l.weights[0], wmax = l.weights[0], wsum = 0;
    for (std::int64_t j = 0; j < l.weights.size(); ++j) {
      wmin = std::min(wmin, static_cast<double>(l.weights[j]));
      wmax = std::max(wmax, static_cast<double>(l.weights[j]));
      wsum += l.weights[j];
    }
    std::printf(
        "layer %zu: %lld -> %lld, kernel %lldx%lld, pad %d, "
        "w[min=%.5f max=%.5f mean=%.6f]\n",
        i + 1, static_cast<long long>(l.in_channels()),
        static_cast<long long>(l.out_channels()),
        static_cast<long long>(l.kernel()), static_cast<long long>(l.kernel()),
        l.pad, wmin, wmax, wsum / static_cast<double>(l.weights.size()));
  }
  std::cout << "parameters=" << model.parameter_count() << "\n";
  std::cout << "receptive_radius=" << model.receptive_radius() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ircnn: fully convolutional image restoration toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for the kernels (default 1)");

  CorruptArgs ca;
  auto* corrupt = app.add_subcommand("corrupt", "apply a synthetic corruption");
  corrupt->add_option("--in", ca.in, "input PPM (P6)")->required();
  corrupt->add_option("--out", ca.out, "output PPM")->required();
  corrupt->add_option("--kind", ca.kind, "gaussian | missing | text")->required();
  corrupt->add_option("--sigma", ca.sigma, "gaussian stddev, 8-bit units");
  corrupt->add_option("--fraction", ca.fraction, "missing-pixel share per channel");
  corrupt->add_option("--text-density", ca.text_density, "pixels per text string");
  corrupt->add_option("--strings", ca.strings, "fixed string count (-1 = from density)");
  corrupt->add_option("--seed", ca.seed, "corruption seed");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "train a model from a dataset manifest");
  train->add_option("--manifest", ta.manifest, "dataset manifest path")->required();
  train->add_option("--widths", ta.widths, "hidden channel counts, 5 comma-separated");
  train->add_option("--lr", ta.lr, "learning rate");
  train->add_option("--momentum", ta.momentum, "momentum coefficient");
  train->add_option("--batch", ta.batch, "mini-batch size");
  train->add_option("--epochs", ta.epochs, "passes over the dataset");
  train->add_option("--seed", ta.seed, "training seed (init + shuffling)");
  train->add_option("--data-seed", ta.data_seed,
                    "overrides the manifest's dataset seed");
  train->add_option("--out-model", ta.out_model, "output model file")->required();
  train->add_option("--log", ta.log, "per-batch loss CSV path");
  train->add_option("--resume", ta.resume, "start from this model file");
  train->add_option("--checkpoint-interval", ta.checkpoint_interval,
                    "iterations between checkpoints (0 = off)");
  train->add_option("--checkpoint-path", ta.checkpoint_path,
                    "checkpoint file (default <out-model>.ckpt)");

  RestoreArgs ra;
  auto* restore = app.add_subcommand("restore", "restore a corrupted image");
  restore->add_option("--model", ra.model, "model file")->required();
  restore->add_option("--in", ra.in, "input PPM")->required();
  restore->add_option("--out", ra.out, "output PPM")->required();
  restore->add_option("--mode", ra.mode, "sliding | whole");
  restore->add_option("--stride", ra.stride, "sliding-window stride, 1..32");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate a model over a directory");
  eval->add_option("--model", ea.model, "model file")->required();
  eval->add_option("--dir", ea.dir, "directory of clean .ppm images")->required();
  eval->add_option("--kind", ea.kind, "gaussian | missing | text");
  eval->add_option("--sigma", ea.sigma, "gaussian stddev");
  eval->add_option("--fraction", ea.fraction, "missing-pixel share");
  eval->add_option("--text-density", ea.text_density, "pixels per text string");
  eval->add_option("--strings", ea.strings, "fixed string count (-1 = from density)");
  eval->add_option("--trials", ea.trials, "corruption trials per image");
  eval->add_option("--stride", ea.stride, "sliding-window stride");
  eval->add_option("--seed", ea.seed, "base seed for trial corruption");
  eval->add_option("--csv", ea.csv, "write the machine-readable report here");

  GradcheckArgs ga;
  auto* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference check of the gradients");
  gradcheck->add_option("--widths", ga.widths, "hidden channel counts");
  gradcheck->add_option("--size", ga.size, "input height/width");
  gradcheck->add_option("--samples", ga.samples, "sampled coordinates per tensor");
  gradcheck->add_option("--tolerance", ga.tolerance, "max relative error");
  gradcheck->add_option("--seed", ga.seed, "model/input seed");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "describe a model file");
  inspect->add_option("--model", inspect_path, "model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ircnn::ExitCode::kUsage);
  }

  ircnn::set_threads(threads);
  try {
    if (corrupt->parsed()) return run_corrupt(ca);
    if (train->parsed()) return run_train(ta);
    if (restore->parsed()) return run_restore(ra);
    if (eval->parsed()) return run_eval(ea);
    if (gradcheck->parsed()) return run_gradcheck(ga);
    if (inspect->parsed()) return run_inspect(inspect_path);
  } catch (const ircnn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ircnn::ExitCode::kData);
  }
  return 0;
}
