// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/model.hpp"

#include <gtest/gtest.h>

#include "ircnn/nn.hpp"
#include "support/test_util.hpp"

namespace {

using ircnn::IrcnnModel;
using ircnn::ModelFormatError;
using ircnn::Shape;
using ircnn::Tensor;
using ircnn::testing::max_abs_diff;
using ircnn::testing::random_tensor;
using ircnn::testing::read_bytes;
using ircnn::testing::TempDir;
using ircnn::testing::write_bytes;

bool bit_identical(const IrcnnModel& a, const IrcnnModel& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& la = a.layers[i];
    const auto& lb = b.layers[i];
    if (!(la.weights.shape() == lb.weights.shape())) return false;
    for (std::int64_t j = 0; j < la.weights.size(); ++j) {
      if (la.weights[j] != lb.weights[j]) return false;
    }
    if (la.biases != lb.biases) return false;
  }
  return true;
}

// parameter total from the architecture alone: sum of outC*inC*k*k + outC
std::int64_t counted_parameters(const std::array<std::int64_t, 5>& widths) {
  const std::array<std::int64_t, 6> kernels = {5, 5, 1, 5, 5, 5};
  std::int64_t in_c = 3, total = 0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const std::int64_t out_c = i < 5 ? widths[i] : 3;
    total += out_c * in_c * kernels[i] * kernels[i] + out_c;
    in_c = out_c;
  }
  return total;
}

TEST(ModelInit, DeterministicPerSeed) {
  const auto a = ircnn::model_init({8, 8, 8, 8, 8}, 5);
  const auto b = ircnn::model_init({8, 8, 8, 8, 8}, 5);
  const auto c = ircnn::model_init({8, 8, 8, 8, 8}, 6);
  EXPECT_TRUE(bit_identical(a, b));
  EXPECT_FALSE(bit_identical(a, c));
}

TEST(ModelInit, ParameterCountDefaultWidths) {
  const auto model = ircnn::model_init(ircnn::kDefaultWidths, 1);
  const std::int64_t expected = counted_parameters(ircnn::kDefaultWidths);
  EXPECT_EQ(expected, 321219);  // frozen from the counting oracle above
  EXPECT_EQ(model.parameter_count(), expected);
}

TEST(ModelInit, MinimalWidthsForwardPreservesShape) {
  const auto model = ircnn::model_init({1, 1, 1, 1, 1}, 2);
  const auto x = random_tensor<float>({1, 3, 8, 8}, 3);
  const auto out = ircnn::model_forward(model, x);
  EXPECT_EQ(out.shape(), (Shape{1, 3, 8, 8}));
}

TEST(ModelInit, BiasesZeroAndWeightsScaled) {
  const auto model = ircnn::model_init(ircnn::kDefaultWidths, 9);
  for (const auto& layer : model.layers) {
    for (const float b : layer.biases) EXPECT_EQ(b, 0.f);
  }
  // He scaling: layer 2 weights should have stddev near sqrt(2/(64*25))
  const auto& l2 = model.layers[1];
  double sum = 0, sumsq = 0;
  for (std::int64_t i = 0; i < l2.weights.size(); ++i) {
    sum += l2.weights[i];
    sumsq += static_cast<double>(l2.weights[i]) * l2.weights[i];
  }
  const double n = static_cast<double>(l2.weights.size());
  const double stddev = std::sqrt(sumsq / n - (sum / n) * (sum / n));
  EXPECT_NEAR(stddev, std::sqrt(2.0 / (64 * 25)), 0.002);
}

TEST(ModelForward, ZeroModelGivesZeros) {
  IrcnnModel model = ircnn::model_init({4, 4, 4, 4, 4}, 1);
  for (auto& layer : model.layers) {
    layer.weights = Tensor(layer.weights.shape());
    std::fill(layer.biases.begin(), layer.biases.end(), 0.f);
  }
  const auto out =
      ircnn::model_forward(model, random_tensor<float>({2, 3, 12, 12}, 4));
  EXPECT_EQ(max_abs_diff(out, Tensor(out.shape())), 0.0);
}

TEST(ModelForward, PreservesSpatialShape) {
  const auto model = ircnn::model_init({6, 6, 6, 6, 6}, 11);
  for (const auto hw : {std::pair<std::int64_t, std::int64_t>{32, 32},
                        {17, 23},
                        {1, 1},
                        {64, 5}}) {
    const auto x = random_tensor<float>({1, 3, hw.first, hw.second}, 12);
    const auto out = ircnn::model_forward(model, x);
    EXPECT_EQ(out.shape(), x.shape());
  }
}

TEST(ModelForward, ChannelMismatchFails) {
  const auto model = ircnn::model_init({4, 4, 4, 4, 4}, 13);
  EXPECT_THROW(ircnn::model_forward(model, Tensor(Shape{1, 4, 8, 8})),
               ircnn::DataError);
}

TEST(ModelBackward, ZeroGradOutGivesZeroGrads) {
  const auto model = ircnn::model_init({4, 4, 4, 4, 4}, 14);
  const auto x = random_tensor<float>({1, 3, 8, 8}, 15);
  ircnn::ForwardCache cache;
  const auto out = ircnn::model_forward_cached(model, x, cache);
  const auto grads =
      ircnn::model_backward(model, cache, Tensor(out.shape()), true);
  for (const auto& g : grads.layer) {
    EXPECT_EQ(max_abs_diff(g.weights, Tensor(g.weights.shape())), 0.0);
    for (const float b : g.biases) EXPECT_EQ(b, 0.f);
  }
  EXPECT_EQ(max_abs_diff(grads.input, Tensor(x.shape())), 0.0);
}

TEST(ModelBackward, MissingCacheFails) {
  const auto model = ircnn::model_init({4, 4, 4, 4, 4}, 16);
  ircnn::ForwardCache empty;
  EXPECT_THROW(
      ircnn::model_backward(model, empty, Tensor(Shape{1, 3, 8, 8})),
      ircnn::UsageError);
}

TEST(ModelBackward, SingleStepDecreasesLoss) {
  IrcnnModel model = ircnn::model_init({8, 8, 8, 8, 8}, 17);
  const auto noisy = random_tensor<float>({1, 3, 32, 32}, 18, -0.5, 0.5);
  const auto clean = random_tensor<float>({1, 3, 32, 32}, 19, -0.5, 0.5);
  auto state = ircnn::OptimizerState::make(model.layers, 1e-5f, 0.f);
  ircnn::ForwardCache cache;
  const auto out = ircnn::model_forward_cached(model, noisy, cache);
  const auto before = ircnn::mse_loss(out, clean);
  const auto grads = ircnn::model_backward(model, cache, before.grad);
  ircnn::sgd_momentum_step(model.layers, grads.layer, state);
  const auto after = ircnn::mse_loss(ircnn::model_forward(model, noisy), clean);
  EXPECT_LT(after.loss, before.loss);
}

TEST(ModelIo, RoundTripIsByteIdentical) {
  TempDir dir("model_io");
  const auto model = ircnn::model_init({8, 8, 8, 8, 8}, 20);
  const auto p1 = dir.file("a.ircnn");
  const auto p2 = dir.file("b.ircnn");
  ircnn::model_save(model, p1);
  const auto loaded = ircnn::model_load(p1);
  ircnn::model_save(loaded, p2);
  EXPECT_EQ(read_bytes(p1), read_bytes(p2));
  EXPECT_TRUE(bit_identical(model, loaded));

  const auto x = random_tensor<float>({1, 3, 16, 16}, 21);
  EXPECT_EQ(max_abs_diff(ircnn::model_forward(model, x),
                         ircnn::model_forward(loaded, x)),
            0.0);
}

TEST(ModelIo, FileSizeMatchesFormat) {
  TempDir dir("model_size");
  const std::array<std::int64_t, 5> widths = {8, 8, 8, 8, 8};
  const auto model = ircnn::model_init(widths, 22);
  const auto path = dir.file("m.ircnn");
  ircnn::model_save(model, path);
  // magic + version + layer count, 16 bytes of shape per layer, 4 bytes per
  // parameter
  const std::int64_t expected =
      12 + 6 * 16 + 4 * counted_parameters(widths);
  EXPECT_EQ(static_cast<std::int64_t>(read_bytes(path).size()), expected);
}

TEST(ModelIo, DistinctErrorsPerCorruption) {
  TempDir dir("model_err");
  const auto model = ircnn::model_init({4, 4, 4, 4, 4}, 23);
  const auto path = dir.file("m.ircnn");
  ircnn::model_save(model, path);
  const auto good = read_bytes(path);

  auto expect_kind = [&](std::vector<unsigned char> bytes,
                         ModelFormatError::Kind kind, const char* what) {
    const auto p = dir.file("bad.ircnn");
    write_bytes(p, bytes);
    try {
      ircnn::model_load(p);
      FAIL() << "expected ModelFormatError for " << what;
    } catch (const ModelFormatError& e) {
      EXPECT_EQ(static_cast<int>(e.kind()), static_cast<int>(kind)) << what;
    }
  };

  auto bad_magic = good;
  bad_magic[0] = 'X';
  expect_kind(bad_magic, ModelFormatError::Kind::kBadMagic, "magic");

  auto bad_version = good;
  bad_version[4] = 99;
  expect_kind(bad_version, ModelFormatError::Kind::kBadVersion, "version");

  auto truncated = good;
  truncated.pop_back();
  expect_kind(truncated, ModelFormatError::Kind::kTruncated, "truncation");

  auto trailing = good;
  trailing.push_back(0);
  expect_kind(trailing, ModelFormatError::Kind::kTrailingBytes, "trailing");

  // first layer claims 5 input channels: breaks the 3-channel chain
  auto bad_chain = good;
  bad_chain[12] = 5;
  expect_kind(bad_chain, ModelFormatError::Kind::kShapeChain, "chain");

  EXPECT_THROW(ircnn::model_load(dir.file("missing.ircnn")), ircnn::DataError);
}

TEST(ModelIo, RejectsWrongKernelPlan) {
  TempDir dir("model_plan");
  // hand-assemble a 1-layer file: valid records, wrong architecture
  std::vector<unsigned char> bytes = {'I', 'R', 'C', 'N', 1, 0, 0, 0,
                                      1,   0,   0,   0};
  auto put_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      bytes.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
  };
  put_u32(3);  // inC
  put_u32(3);  // outC
  put_u32(1);  // kH
  put_u32(1);  // kW
  for (int i = 0; i < 9 + 3; ++i) put_u32(0);  // weights + biases
  const auto p = dir.file("plan.ircnn");
  write_bytes(p, bytes);
  EXPECT_THROW(ircnn::model_load(p), ModelFormatError);
}

}  // namespace
