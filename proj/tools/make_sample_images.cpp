// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Writes a directory of deterministic synthetic PPM images, handy for
// trying the pipeline without hunting for a dataset.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "ircnn/image.hpp"
#include "ircnn/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate synthetic sample images"};
  std::string out_dir = "sample_images";
  std::int64_t count = 20;
  std::int64_t size = 128;
  std::uint64_t seed = 1;
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--count", count, "number of images");
  app.add_option("--size", size, "image height and width");
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  for (std::int64_t i = 0; i < count; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "sample_%03lld.ppm",
                  static_cast<long long>(i));
    const ircnn::Image img =
        ircnn::make_synthetic_image(size, size, seed + static_cast<std::uint64_t>(i));
    ircnn::save_ppm(img, (std::filesystem::path(out_dir) / name).string());
  }
  std::printf("wrote %lld images to %s\n", static_cast<long long>(count),
              out_dir.c_str());
  return 0;
}
