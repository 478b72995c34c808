// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmrs/error.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  require(!layers_.empty(), Errc::ShapeMismatch, "model needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    const bool last = l + 1 == layers_.size();
    const std::string where = "layer " + std::to_string(l);
    require(layer.inputs > 0 && layer.outputs > 0, Errc::ShapeMismatch, where + " is empty");
    require(layer.weights.size() == layer.inputs * layer.outputs, Errc::ShapeMismatch,
            where + " weight count does not match its shape");
    require(layer.bias.size() == layer.outputs, Errc::ShapeMismatch,
            where + " bias length does not match its width");
    if (l > 0) {
      require(layers_[l - 1].outputs == layer.inputs, Errc::ShapeMismatch,
              where + " input width does not match previous layer");
    }
    require((layer.activation == Activation::Softmax) == last, Errc::ShapeMismatch,
            "softmax must be the final activation and only there");
    require(layer.dropout >= 0.0 && layer.dropout < 1.0, Errc::InvalidArgument,
            where + " dropout outside [0,1)");
    require(!last || layer.dropout == 0.0, Errc::InvalidArgument,
            "output layer cannot use dropout");
    if (!last) hidden_neurons_ += layer.outputs;
  }
}

bool Mlp::has_dropout() const noexcept {
  return std::any_of(layers_.begin(), layers_.end(),
                     [](const DenseLayer& l) { return l.dropout > 0.0; });
}

namespace {

void softmax_inplace(std::vector<double>& z) {
  const double peak = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

// Cached per-layer state for backprop. `scale` holds the dropout multiplier
// (0 or 1/(1-p)) per neuron, or is empty when the layer was not dropped.
struct LayerState {
  std::vector<double> pre;
  std::vector<double> post;
  std::vector<double> scale;
};

struct Pass {
  std::vector<LayerState> layers;
  std::vector<double> logits;
};

void check_input(const Mlp& model, std::size_t n) {
  require(!model.layers().empty(), Errc::ShapeMismatch, "empty model");
  require(n == model.input_dim(), Errc::DimensionMismatch,
          "input has " + std::to_string(n) + " values, model expects " +
              std::to_string(model.input_dim()));
}

// z = W x + b over the non-zero inputs only. Skipping a zero input leaves
// every partial sum unchanged, so the result is bit-identical to the dense
// loop; ReLU and dropout make a large share of hidden inputs zero.
void affine(const DenseLayer& layer, std::span<const double> x, std::vector<double>& z,
            std::vector<std::size_t>& nonzero) {
  nonzero.clear();
  for (std::size_t i = 0; i < layer.inputs; ++i) {
    if (x[i] != 0.0) nonzero.push_back(i);
  }
  z.resize(layer.outputs);
  for (std::size_t o = 0; o < layer.outputs; ++o) {
    const double* w = layer.weights.data() + o * layer.inputs;
    double acc = layer.bias[o];
    for (std::size_t i : nonzero) acc += w[i] * x[i];
    z[o] = acc;
  }
}

void relu_dropout(const DenseLayer& layer, const std::vector<double>& z, std::vector<double>& out,
                  Rng& rng) {
  out.resize(z.size());
  for (std::size_t o = 0; o < z.size(); ++o) out[o] = std::max(0.0, z[o]);
  if (layer.dropout <= 0.0) return;
  const double keep_scale = 1.0 / (1.0 - layer.dropout);
  for (double& v : out) v *= rng.uniform() < layer.dropout ? 0.0 : keep_scale;
}

Pass run(const Mlp& model, std::span<const double> input,
         const std::optional<DropoutSampling>& dropout) {
  check_input(model, input.size());
  const auto& layers = model.layers();
  Pass pass;
  pass.layers.resize(layers.size() - 1);
  std::optional<Rng> rng;
  if (dropout) rng.emplace(dropout->seed);

  std::vector<std::size_t> nonzero;
  std::span<const double> x = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    std::vector<double> z;
    affine(layer, x, z, nonzero);
    if (l + 1 == layers.size()) {
      pass.logits = std::move(z);
      break;
    }
    LayerState& state = pass.layers[l];
    state.post.resize(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) state.post[o] = std::max(0.0, z[o]);
    state.pre = std::move(z);
    const double rate = dropout && dropout->rate_override ? *dropout->rate_override : layer.dropout;
    if (rng && rate > 0.0) {
      require(rate < 1.0, Errc::InvalidArgument, "dropout rate must be below 1");
      const double keep_scale = 1.0 / (1.0 - rate);
      state.scale.resize(layer.outputs);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        state.scale[o] = rng->uniform() < rate ? 0.0 : keep_scale;
        state.post[o] *= state.scale[o];
      }
    }
    x = state.post;
  }
  return pass;
}

}  // namespace

ForwardResult forward(const Mlp& model, const Image& image,
                      const std::optional<DropoutSampling>& dropout) {
  Pass pass = run(model, image.data, dropout);
  ForwardResult result;
  result.trace.values.reserve(model.hidden_neurons());
  result.trace.layer_offsets.reserve(pass.layers.size() + 1);
  for (const LayerState& state : pass.layers) {
    result.trace.layer_offsets.push_back(result.trace.values.size());
    result.trace.values.insert(result.trace.values.end(), state.post.begin(), state.post.end());
  }
  result.trace.layer_offsets.push_back(result.trace.values.size());
  softmax_inplace(pass.logits);
  result.probabilities = std::move(pass.logits);
  return result;
}

std::vector<double> probabilities(const Mlp& model, const Image& image,
                                  const std::optional<DropoutSampling>& dropout) {
  Pass pass = run(model, image.data, dropout);
  softmax_inplace(pass.logits);
  return std::move(pass.logits);
}

std::size_t argmax(std::span<const double> values) {
  require(!values.empty(), Errc::InvalidArgument, "argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t predict(const Mlp& model, const Image& image) {
  Pass pass = run(model, image.data, std::nullopt);
  return argmax(pass.logits);
}

double certainty(const Mlp& model, const Image& image, std::size_t n_samples,
                 std::uint64_t seed) {
  require(n_samples >= 1, Errc::InvalidArgument, "certainty needs at least one sample");
  check_input(model, image.size());
  // Same arithmetic and random draws as n dropout forward passes, but the
  // first layer only sees the input, so its pre-activations are shared.
  const auto& layers = model.layers();
  std::vector<std::size_t> nonzero;
  std::vector<double> first;
  affine(layers.front(), image.data, first, nonzero);
  std::vector<double> mean(model.num_classes(), 0.0);
  std::vector<double> x;
  std::vector<double> z;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Rng rng(derive_seed(seed, {s}));
    if (layers.size() == 1) {
      z = first;
    } else {
      relu_dropout(layers.front(), first, x, rng);
      for (std::size_t l = 1; l < layers.size(); ++l) {
        affine(layers[l], x, z, nonzero);
        if (l + 1 < layers.size()) relu_dropout(layers[l], z, x, rng);
      }
    }
    softmax_inplace(z);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += z[k];
  }
  for (double& v : mean) v /= static_cast<double>(n_samples);
  return mean[argmax(mean)];
}

double cross_entropy(const Mlp& model, std::span<const double> input, std::size_t label) {
  Pass pass = run(model, input, std::nullopt);
  require(label < pass.logits.size(), Errc::InvalidArgument, "label out of range");
  const double peak = *std::max_element(pass.logits.begin(), pass.logits.end());
  double sum = 0.0;
  for (double z : pass.logits) sum += std::exp(z - peak);
  return peak + std::log(sum) - pass.logits[label];
}

LossGradient loss_gradient(const Mlp& model, std::span<const double> input, std::size_t label,
                           bool with_parameters,
                           const std::optional<DropoutSampling>& dropout) {
  Pass pass = run(model, input, dropout);
  const auto& layers = model.layers();
  require(label < model.num_classes(), Errc::InvalidArgument, "label out of range");

  LossGradient grad;
  {
    const double peak = *std::max_element(pass.logits.begin(), pass.logits.end());
    double sum = 0.0;
    for (double z : pass.logits) sum += std::exp(z - peak);
    grad.loss = peak + std::log(sum) - pass.logits[label];
  }
  std::vector<double> delta = pass.logits;
  softmax_inplace(delta);
  delta[label] -= 1.0;

  if (with_parameters) grad.layers.resize(layers.size());
  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseLayer& layer = layers[l];
    std::span<const double> below =
        l == 0 ? input : std::span<const double>(pass.layers[l - 1].post);
    if (with_parameters) {
      LayerGradient& g = grad.layers[l];
      g.bias = delta;
      g.weights.resize(layer.weights.size());
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        for (std::size_t i = 0; i < layer.inputs; ++i) {
          g.weights[o * layer.inputs + i] = delta[o] * below[i];
        }
      }
    }
    std::vector<double> prev(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* w = layer.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) prev[i] += w[i] * delta[o];
    }
    if (l > 0) {
      const LayerState& state = pass.layers[l - 1];
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (state.pre[i] <= 0.0) prev[i] = 0.0;
        else if (!state.scale.empty()) prev[i] *= state.scale[i];
      }
    }
    delta = std::move(prev);
  }
  grad.input = std::move(delta);
  return grad;
}

}  // namespace hmrs
