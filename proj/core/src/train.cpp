// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/train.hpp"

#include <cmath>
#include <numeric>

#include "hmrs/error.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

Architecture default_architecture() { return Architecture{{64, 32}, {0.25, 0.25}}; }

namespace {

DenseLayer init_layer(std::size_t in, std::size_t out, Activation act, double dropout, Rng& rng) {
  DenseLayer layer;
  layer.inputs = in;
  layer.outputs = out;
  layer.activation = act;
  layer.dropout = dropout;
  layer.bias.assign(out, 0.0);
  layer.weights.resize(in * out);
  const double scale = std::sqrt((act == Activation::Relu ? 2.0 : 1.0) / static_cast<double>(in));
  for (double& w : layer.weights) w = scale * rng.normal();
  return layer;
}

}  // namespace

Mlp train_toy(const Architecture& arch, const Dataset& data, const TrainOptions& options) {
  require(!data.empty(), Errc::EmptyDataset, "training set is empty");
  require(options.epochs >= 1, Errc::InvalidArgument, "epochs must be at least 1");
  require(options.learning_rate > 0.0, Errc::InvalidArgument, "learning rate must be positive");
  require(options.batch_size >= 1, Errc::InvalidArgument, "batch size must be at least 1");
  require(arch.dropout.size() == arch.hidden.size(), Errc::InvalidArgument,
          "need one dropout rate per hidden layer");
  data.validate();

  Rng init_rng(derive_seed(options.seed, {0x1417}));
  std::vector<DenseLayer> layers;
  std::size_t width = data.images.front().size();
  for (std::size_t l = 0; l < arch.hidden.size(); ++l) {
    layers.push_back(init_layer(width, arch.hidden[l], Activation::Relu, arch.dropout[l], init_rng));
    width = arch.hidden[l];
  }
  layers.push_back(init_layer(width, data.num_classes, Activation::Softmax, 0.0, init_rng));
  Mlp model(layers);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(options.seed, {0x5eed, epoch}));
    shuffle_rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      std::vector<LayerGradient> sum;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const bool dropout = model.has_dropout();
        auto g = loss_gradient(model, data.images[i].data, data.labels[i], true,
                               dropout ? std::optional<DropoutSampling>(DropoutSampling{
                                             derive_seed(options.seed, {0xd0d0, epoch, i}), {}})
                                       : std::nullopt);
        if (sum.empty()) {
          sum = std::move(g.layers);
          continue;
        }
        for (std::size_t l = 0; l < sum.size(); ++l) {
          for (std::size_t j = 0; j < sum[l].weights.size(); ++j) sum[l].weights[j] += g.layers[l].weights[j];
          for (std::size_t j = 0; j < sum[l].bias.size(); ++j) sum[l].bias[j] += g.layers[l].bias[j];
        }
      }
      const double step = options.learning_rate / static_cast<double>(end - start);
      for (std::size_t l = 0; l < layers.size(); ++l) {
        for (std::size_t j = 0; j < layers[l].weights.size(); ++j) layers[l].weights[j] -= step * sum[l].weights[j];
        for (std::size_t j = 0; j < layers[l].bias.size(); ++j) layers[l].bias[j] -= step * sum[l].bias[j];
      }
      model = Mlp(layers);
    }
  }
  return model;
}

double accuracy(const Mlp& model, const Dataset& data) {
  require(!data.empty(), Errc::EmptyDataset, "accuracy of empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) hits += predict(model, data.images[i]) == data.labels[i];
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace hmrs
