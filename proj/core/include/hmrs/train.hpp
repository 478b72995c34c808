// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hmrs/image.hpp"
#include "hmrs/model.hpp"

namespace hmrs {

struct Architecture {
  std::vector<std::size_t> hidden;
  /// One rate per hidden layer.
  std::vector<double> dropout;
};

struct TrainOptions {
  std::size_t epochs = 60;
  double learning_rate = 0.05;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
};

/// Default toy network for 8x8 digits: 64-64-32-10 with dropout 0.25.
Architecture default_architecture();

/// Minibatch SGD on cross-entropy with He-initialised weights and inverted
/// dropout. Bit-identical output for identical inputs.
Mlp train_toy(const Architecture& arch, const Dataset& data, const TrainOptions& options);

double accuracy(const Mlp& model, const Dataset& data);

}  // namespace hmrs
