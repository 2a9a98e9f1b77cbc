// Copyright 2026 The ircnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "ircnn/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

TEST(Rng, DeterministicPerSeed) {
  ircnn::Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff_from_c = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff_from_c = any_diff_from_c || va != c.next_u64();
  }
  EXPECT_TRUE(all_equal);
  EXPECT_TRUE(any_diff_from_c);
}

TEST(Rng, ZeroSeedWorks) {
  ircnn::Rng r(0);
  EXPECT_NE(r.next_u64(), 0u);  // state never collapses to zero
}

TEST(Rng, Uniform01Range) {
  ircnn::Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const double v = r.uniform01();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Rng, UniformBelowBounds) {
  ircnn::Rng r(9);
  EXPECT_EQ(r.uniform_below(0), 0u);
  EXPECT_EQ(r.uniform_below(1), 0u);
  bool hit_max = false, hit_min = false;
  for (int i = 0; i < 5000; ++i) {
    const auto v = r.uniform_below(7);
    EXPECT_LT(v, 7u);
    hit_max = hit_max || v == 6;
    hit_min = hit_min || v == 0;
  }
  EXPECT_TRUE(hit_max);
  EXPECT_TRUE(hit_min);
}

TEST(Rng, NormalMoments) {
  ircnn::Rng r(123);
  const int n = 200000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = r.normal();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sumsq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(stddev, 1.0, 0.01);
}

TEST(Rng, DeriveSeedSeparatesStreams) {
  const auto s1 = ircnn::derive_seed(5, 0);
  const auto s2 = ircnn::derive_seed(5, 1);
  const auto s3 = ircnn::derive_seed(6, 0);
  EXPECT_NE(s1, s2);
  EXPECT_NE(s1, s3);
  EXPECT_EQ(s1, ircnn::derive_seed(5, 0));
}

}  // namespace
