// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0
//
// Drives the installed binary end to end: exit-code contract, determinism,
// format round-trips. The binary path arrives in IRCNN_CLI.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "ircnn/image.hpp"
#include "ircnn/model.hpp"
#include "ircnn/synth.hpp"
#include "support/test_util.hpp"

namespace {

using ircnn::testing::read_bytes;
using ircnn::testing::TempDir;

std::string cli_path() {
  const char* p = std::getenv("IRCNN_CLI");
  if (p == nullptr) {
    ADD_FAILURE() << "IRCNN_CLI not set";
    return "false";
  }
  return p;
}

int run(const std::string& args, const std::string& log) {
  const std::string cmd = cli_path() + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  std::string image(std::int64_t size, std::uint64_t seed,
                    const std::string& name) {
    const auto p = dir_.file(name);
    ircnn::save_ppm(ircnn::make_synthetic_image(size, size, seed), p);
    return p;
  }

  std::string manifest(const std::string& body, int images,
                       std::int64_t size) {
    std::string text = body + "\n[images]\n";
    for (int i = 0; i < images; ++i) {
      const std::string name = "train_" + std::to_string(i) + ".ppm";
      image(size, 100 + static_cast<std::uint64_t>(i), name);
      text += name + "\n";
    }
    const auto p = dir_.file("manifest.txt");
    std::ofstream(p) << text;
    return p;
  }

  TempDir dir_;
};

TEST_F(CliTest, UnknownFlagIsUsageError) {
  EXPECT_EQ(run("corrupt --does-not-exist 1", dir_.file("log")), 1);
  EXPECT_EQ(run("bogus-subcommand", dir_.file("log")), 1);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run("--help", dir_.file("log")), 0);
}

TEST_F(CliTest, CorruptSigmaZeroRoundTripsExactly) {
  const auto in = image(48, 1, "in.ppm");
  const auto out = dir_.file("out.ppm");
  ASSERT_EQ(run("corrupt --in " + in + " --out " + out +
                    " --kind gaussian --sigma 0 --seed 5",
                dir_.file("log")),
            0);
  EXPECT_EQ(read_bytes(in), read_bytes(out));
  EXPECT_NE(slurp(dir_.file("log")).find("config:"), std::string::npos);
}

TEST_F(CliTest, CorruptMissingZeroesExactShare) {
  const auto in = image(50, 2, "in.ppm");
  const auto out = dir_.file("out.ppm");
  ASSERT_EQ(run("corrupt --in " + in + " --out " + out +
                    " --kind missing --fraction 0.8 --seed 3",
                dir_.file("log")),
            0);
  const ircnn::Image img = ircnn::load_ppm(out);
  for (std::int64_t c = 0; c < 3; ++c) {
    std::int64_t zeros = 0;
    for (std::int64_t i = 0; i < 50 * 50; ++i) {
      if (img.px[static_cast<std::size_t>(c * 50 * 50 + i)] == 0.f) ++zeros;
    }
    EXPECT_EQ(zeros, 2000);
  }
}

TEST_F(CliTest, CorruptIsDeterministic) {
  const auto in = image(48, 3, "in.ppm");
  const auto out1 = dir_.file("o1.ppm");
  const auto out2 = dir_.file("o2.ppm");
  const std::string flags = " --kind text --seed 9";
  ASSERT_EQ(run("corrupt --in " + in + " --out " + out1 + flags, dir_.file("l1")), 0);
  ASSERT_EQ(run("corrupt --in " + in + " --out " + out2 + flags, dir_.file("l2")), 0);
  EXPECT_EQ(read_bytes(out1), read_bytes(out2));
}

TEST_F(CliTest, CorruptDecodeFailureIsDataError) {
  std::ofstream(dir_.file("bad.ppm")) << "junk";
  EXPECT_EQ(run("corrupt --in " + dir_.file("bad.ppm") + " --out " +
                    dir_.file("o.ppm") + " --kind gaussian",
                dir_.file("log")),
            2);
}

TEST_F(CliTest, TrainZeroEpochsWritesInitializedModel) {
  const auto mpath = manifest(
      "corruption = gaussian\nsigma = 25\npatches_per_image = 2\nseed = 4", 2,
      40);
  const auto model_out = dir_.file("model.ircnn");
  ASSERT_EQ(run("train --manifest " + mpath + " --widths 4,4,4,4,4 " +
                    "--epochs 0 --seed 11 --out-model " + model_out,
                dir_.file("log")),
            0);
  const auto loaded = ircnn::model_load(model_out);
  const auto expected = ircnn::model_init({4, 4, 4, 4, 4}, 11);
  for (std::size_t i = 0; i < loaded.layers.size(); ++i) {
    EXPECT_EQ(ircnn::testing::max_abs_diff(loaded.layers[i].weights,
                                           expected.layers[i].weights),
              0.0);
  }
}

TEST_F(CliTest, TrainLossCsvIsDeterministic) {
  const auto mpath = manifest(
      "corruption = missing\nfraction = 0.8\npatches_per_image = 4\nseed = 6",
      2, 40);
  const std::string base = "train --manifest " + mpath +
                           " --widths 4,4,4,4,4 --batch 4 --epochs 2 "
                           "--lr 1e-4 --seed 13 --threads 1";
  ASSERT_EQ(run(base + " --out-model " + dir_.file("m1.ircnn") + " --log " +
                    dir_.file("loss1.csv"),
                dir_.file("l1")),
            0);
  ASSERT_EQ(run(base + " --out-model " + dir_.file("m2.ircnn") + " --log " +
                    dir_.file("loss2.csv"),
                dir_.file("l2")),
            0);
  const auto csv1 = read_bytes(dir_.file("loss1.csv"));
  EXPECT_FALSE(csv1.empty());
  EXPECT_EQ(csv1, read_bytes(dir_.file("loss2.csv")));
  EXPECT_EQ(read_bytes(dir_.file("m1.ircnn")), read_bytes(dir_.file("m2.ircnn")));
}

TEST_F(CliTest, TrainBadManifestIsDataError) {
  std::ofstream(dir_.file("broken.txt")) << "sigma = 1\n[images]\nx.ppm\n";
  EXPECT_EQ(run("train --manifest " + dir_.file("broken.txt") +
                    " --out-model " + dir_.file("m.ircnn"),
                dir_.file("log")),
            2);
}

TEST_F(CliTest, RestoreContracts) {
  // model to work with
  const auto mpath = manifest(
      "corruption = gaussian\nsigma = 25\npatches_per_image = 2\nseed = 4", 2,
      40);
  const auto model_out = dir_.file("model.ircnn");
  ASSERT_EQ(run("train --manifest " + mpath +
                    " --widths 4,4,4,4,4 --epochs 0 --seed 2 --out-model " +
                    model_out,
                dir_.file("log")),
            0);

  const auto in32 = image(32, 7, "in32.ppm");
  const auto out_s = dir_.file("out_s.ppm");
  const auto out_w = dir_.file("out_w.ppm");
  ASSERT_EQ(run("restore --model " + model_out + " --in " + in32 + " --out " +
                    out_s + " --mode sliding --stride 8",
                dir_.file("l1")),
            0);
  ASSERT_EQ(run("restore --model " + model_out + " --in " + in32 + " --out " +
                    out_w + " --mode whole",
                dir_.file("l2")),
            0);
  EXPECT_EQ(read_bytes(out_s), read_bytes(out_w));
  EXPECT_NE(slurp(dir_.file("l1")).find("restored in"), std::string::npos);

  EXPECT_EQ(run("restore --model " + dir_.file("absent.ircnn") + " --in " +
                    in32 + " --out " + dir_.file("x.ppm"),
                dir_.file("l3")),
            2);
  EXPECT_EQ(run("restore --model " + model_out + " --in " + in32 + " --out " +
                    dir_.file("x.ppm") + " --stride 33",
                dir_.file("l4")),
            1);
}

TEST_F(CliTest, EvalWritesDeterministicCsv) {
  const auto mpath = manifest(
      "corruption = gaussian\nsigma = 25\npatches_per_image = 2\nseed = 4", 2,
      40);
  const auto model_out = dir_.file("model.ircnn");
  ASSERT_EQ(run("train --manifest " + mpath +
                    " --widths 4,4,4,4,4 --epochs 0 --seed 2 --out-model " +
                    model_out,
                dir_.file("log")),
            0);
  std::filesystem::create_directories(dir_.file("evaldir"));
  ircnn::save_ppm(ircnn::make_synthetic_image(40, 40, 50),
                  dir_.file("evaldir/a.ppm"));
  ircnn::save_ppm(ircnn::make_synthetic_image(40, 40, 51),
                  dir_.file("evaldir/b.ppm"));
  const std::string base = "eval --model " + model_out + " --dir " +
                           dir_.file("evaldir") +
                           " --kind gaussian --sigma 25 --trials 2 --seed 5 "
                           "--threads 1 --csv ";
  ASSERT_EQ(run(base + dir_.file("r1.csv"), dir_.file("l1")), 0);
  ASSERT_EQ(run(base + dir_.file("r2.csv"), dir_.file("l2")), 0);
  const auto csv = read_bytes(dir_.file("r1.csv"));
  EXPECT_FALSE(csv.empty());
  EXPECT_EQ(csv, read_bytes(dir_.file("r2.csv")));
  // single-row sanity: table mentions both images and a mean line
  const auto table = slurp(dir_.file("l1"));
  EXPECT_NE(table.find("a.ppm"), std::string::npos);
  EXPECT_NE(table.find("mean"), std::string::npos);
}

TEST_F(CliTest, GradcheckExitCodes) {
  EXPECT_EQ(run("gradcheck --size 6 --samples 50", dir_.file("l1")), 0);
  EXPECT_NE(slurp(dir_.file("l1")).find("PASS"), std::string::npos);
  EXPECT_EQ(run("gradcheck --size 6 --samples 50 --tolerance 1e-12",
                dir_.file("l2")),
            3);
}

TEST_F(CliTest, InspectPrintsArchitecture) {
  const auto mpath = manifest(
      "corruption = gaussian\nsigma = 25\npatches_per_image = 2\nseed = 4", 2,
      40);
  const auto model_out = dir_.file("model.ircnn");
  ASSERT_EQ(run("train --manifest " + mpath +
                    " --widths 8,8,8,8,8 --epochs 0 --seed 2 --out-model " +
                    model_out,
                dir_.file("log")),
            0);
  ASSERT_EQ(run("inspect --model " + model_out, dir_.file("l1")), 0);
  const auto text = slurp(dir_.file("l1"));
  EXPECT_NE(text.find("parameters=6107"), std::string::npos) << text;
  EXPECT_NE(text.find("layers=6"), std::string::npos);
}

}  // namespace
