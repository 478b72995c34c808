// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/fgsm.hpp"

#include "hmrs/error.hpp"

namespace hmrs {

std::vector<double> input_gradient(const Mlp& model, const Image& image, std::size_t label) {
  return loss_gradient(model, image.data, label, false).input;
}

Image fgsm(const Mlp& model, const Image& image, std::size_t label, double epsilon) {
  require(epsilon >= 0.0, Errc::InvalidArgument, "epsilon must be non-negative");
  const auto grad = input_gradient(model, image, label);
  Image out = image;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const double sign = grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0);
    out.data[i] += epsilon * sign;
  }
  out.clamp();
  return out;
}

Dataset fgsm_dataset(const Mlp& model, const Dataset& data, double epsilon) {
  Dataset out;
  out.num_classes = data.num_classes;
  out.labels = data.labels;
  out.images.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.images.push_back(fgsm(model, data.images[i], data.labels[i], epsilon));
  }
  return out;
}

}  // namespace hmrs
