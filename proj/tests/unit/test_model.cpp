// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "hmrs/error.hpp"
#include "hmrs/model.hpp"

namespace hmrs {
namespace {

using testing::dense;
using testing::random_image;
using testing::random_mlp;
using testing::vector_image;

std::vector<double> softmax_of(std::vector<double> v) {
  const double peak = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) sum += (x = std::exp(x - peak));
  for (double& x : v) x /= sum;
  return v;
}

TEST(Forward, IdentityLayerGivesSoftmaxOfInput) {
  Mlp m({dense(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}, Activation::Softmax)});
  const std::vector<double> v{0.2, 0.7, 0.1};
  const auto r = forward(m, vector_image(v));
  const auto expected = softmax_of(v);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.probabilities[i], expected[i], 1e-15);
  EXPECT_EQ(r.trace.size(), 0u);
}

TEST(Forward, HandComputedTwoTwoTwo) {
  // hidden = relu(W1 x + b1) with x = [1,0]: [0.5+0.1, -0.3+0.2] -> [0.6, 0]
  // logits = W2 h + b2 = [1*0.6 + 2*0 + 0, -1*0.6 + 0.5*0 + 0.1] = [0.6, -0.5]
  Mlp m({dense(2, 2, {0.5, 1.0, -0.3, 2.0}, {0.1, 0.2}, Activation::Relu),
         dense(2, 2, {1.0, 2.0, -1.0, 0.5}, {0.0, 0.1}, Activation::Softmax)});
  const auto r = forward(m, vector_image({1.0, 0.0}));
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_DOUBLE_EQ(r.trace.values[0], 0.6);
  EXPECT_DOUBLE_EQ(r.trace.values[1], 0.0);
  const double e0 = std::exp(0.6);
  const double e1 = std::exp(-0.5);
  EXPECT_NEAR(r.probabilities[0], e0 / (e0 + e1), 1e-15);
  EXPECT_NEAR(r.probabilities[1], e1 / (e0 + e1), 1e-15);
  EXPECT_EQ(r.trace.layer_offsets, (std::vector<std::size_t>{0, 2}));
}

TEST(Forward, ZeroRateDropoutEqualsPlainForward) {
  const Mlp m = random_mlp({9, 6, 4, 3}, 11, 0.3);
  const Image img = random_image(3, 3, 5);
  const auto plain = forward(m, img);
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const auto r = forward(m, img, DropoutSampling{seed, 0.0});
    EXPECT_EQ(r.probabilities, plain.probabilities);
    EXPECT_EQ(r.trace.values, plain.trace.values);
  }
}

TEST(Forward, SoftmaxSumsToOneAndIsDeterministic) {
  const Mlp m = random_mlp({16, 8, 8, 5}, 3, 0.25);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Image img = random_image(4, 4, s);
    const auto a = forward(m, img, DropoutSampling{s, std::nullopt});
    const auto b = forward(m, img, DropoutSampling{s, std::nullopt});
    EXPECT_EQ(a.probabilities, b.probabilities);
    const double sum = std::accumulate(a.probabilities.begin(), a.probabilities.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-6);
    for (double p : a.probabilities) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(Forward, InvertedDropoutScalesSurvivors) {
  const Mlp m = random_mlp({4, 50, 2}, 8, 0.5);
  const Image img = vector_image({0.3, 0.9, 0.1, 0.5});
  const auto plain = forward(m, img);
  const auto dropped = forward(m, img, DropoutSampling{17, std::nullopt});
  std::size_t zeroed = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const double d = dropped.trace.values[i];
    if (d == 0.0 && plain.trace.values[i] != 0.0) ++zeroed;
    if (d != 0.0) {
      EXPECT_DOUBLE_EQ(d, 2.0 * plain.trace.values[i]);
    }
  }
  EXPECT_GT(zeroed, 0u);
}

TEST(Forward, DimensionMismatchThrows) {
  const Mlp m = random_mlp({4, 3, 2}, 1);
  try {
    forward(m, random_image(3, 3, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Mlp, RejectsBadShapes) {
  EXPECT_THROW(Mlp({dense(2, 2, {1, 2, 3}, {0, 0}, Activation::Softmax)}), Error);
  EXPECT_THROW(Mlp({dense(2, 2, {1, 2, 3, 4}, {0, 0}, Activation::Relu)}), Error);
  EXPECT_THROW(Mlp({dense(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::Relu),
                    dense(3, 2, {1, 0, 0, 1, 0, 0}, {0, 0}, Activation::Softmax)}),
               Error);
  EXPECT_THROW(Mlp({dense(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::Relu, 1.0),
                    dense(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::Softmax)}),
               Error);
}

TEST(Argmax, LowestIndexOnTies) {
  const std::vector<double> v{0.1, 0.4, 0.4, 0.1};
  EXPECT_EQ(argmax(v), 1u);
}

TEST(Certainty, NoDropoutEqualsSinglePassMax) {
  const Mlp m = random_mlp({9, 5, 3}, 21, 0.0);
  const Image img = random_image(3, 3, 2);
  const auto p = forward(m, img).probabilities;
  const double expected = *std::max_element(p.begin(), p.end());
  for (std::size_t n : {1u, 7u, 40u}) {
    for (std::uint64_t seed : {3ULL, 12345ULL}) {
      EXPECT_DOUBLE_EQ(certainty(m, img, n, seed), expected);
    }
  }
}

TEST(Certainty, ZeroLogitsGiveUniform) {
  Mlp m({dense(2, 4, std::vector<double>(8, 0.0), std::vector<double>(4, 0.0),
               Activation::Softmax)});
  EXPECT_DOUBLE_EQ(certainty(m, vector_image({0.5, 0.5}), 10, 1), 0.25);
}

TEST(Certainty, MatchesIndependentReplay) {
  // Replay: average n dropout forward passes, sample s seeded by
  // derive_seed(seed, {s}), through the generic forward() path.
  const Mlp m = random_mlp({6, 12, 8, 2}, 5, 0.3);
  const Image img = vector_image({0.1, 0.8, 0.0, 0.4, 0.9, 0.2});
  const std::uint64_t seed = 2024;
  std::vector<double> mean(2, 0.0);
  for (std::size_t s = 0; s < 100; ++s) {
    const auto p = forward(m, img, DropoutSampling{derive_seed(seed, {s}), std::nullopt});
    for (std::size_t k = 0; k < 2; ++k) mean[k] += p.probabilities[k];
  }
  for (double& v : mean) v /= 100.0;
  const double expected = std::max(mean[0], mean[1]);
  EXPECT_NEAR(certainty(m, img, 100, seed), expected, 1e-12);
  EXPECT_EQ(certainty(m, img, 100, seed), certainty(m, img, 100, seed));
}

TEST(Certainty, RejectsZeroSamples) {
  const Mlp m = random_mlp({2, 2}, 1);
  EXPECT_THROW(certainty(m, vector_image({0.0, 1.0}), 0, 1), Error);
}

}  // namespace
}  // namespace hmrs
