// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hmrs/digits.hpp"
#include "hmrs/image.hpp"
#include "hmrs/model.hpp"
#include "hmrs/rng.hpp"
#include "hmrs/train.hpp"

namespace hmrs::testing {

inline DenseLayer dense(std::size_t in, std::size_t out, std::vector<double> w, std::vector<double> b,
                        Activation act, double dropout = 0.0) {
  DenseLayer l;
  l.inputs = in;
  l.outputs = out;
  l.weights = std::move(w);
  l.bias = std::move(b);
  l.activation = act;
  l.dropout = dropout;
  return l;
}

/// Random MLP with the given widths (input first, classes last).
inline Mlp random_mlp(const std::vector<std::size_t>& widths, std::uint64_t seed,
                      double dropout = 0.0) {
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const bool last = l + 2 == widths.size();
    std::vector<double> w(widths[l] * widths[l + 1]);
    std::vector<double> b(widths[l + 1]);
    for (double& v : w) v = rng.uniform(-1.0, 1.0);
    for (double& v : b) v = rng.uniform(-0.2, 0.2);
    layers.push_back(dense(widths[l], widths[l + 1], std::move(w), std::move(b),
                           last ? Activation::Softmax : Activation::Relu, last ? 0.0 : dropout));
  }
  return Mlp(std::move(layers));
}

inline Image random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  Image img(h, w);
  for (double& v : img.data) v = rng.uniform();
  return img;
}

inline Image vector_image(const std::vector<double>& values) {
  Image img(1, values.size());
  img.data = values;
  return img;
}

/// Small trained digit classifier, built once. Sound digits are at least as
/// certain as uniform noise at every threshold, so identity chains pass the
/// validity bound.
inline const Mlp& trained_toy_model() {
  static const Mlp model = [] {
    TrainOptions opt;
    opt.epochs = 40;
    return train_toy(Architecture{{64}, {0.25}}, synthetic_digits(600, 1), opt);
  }();
  return model;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hmrs-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace hmrs::testing
