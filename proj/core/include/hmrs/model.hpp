// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hmrs/image.hpp"

namespace hmrs {

enum class Activation { Relu, Softmax };

/// Fully connected layer. `weights` is out x in, row-major. `dropout` is the
/// drop probability applied to this layer's outputs when sampling; it must
/// be 0 on the softmax layer.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  Activation activation = Activation::Relu;
  double dropout = 0.0;

  double weight(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Feedforward classifier: ReLU hidden layers followed by one softmax layer.
/// Immutable once constructed, so concurrent forward passes are safe.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::size_t input_dim() const noexcept { return layers_.front().inputs; }
  std::size_t num_classes() const noexcept { return layers_.back().outputs; }
  /// Total hidden neuron count, i.e. the length of every ActivationTrace.
  std::size_t hidden_neurons() const noexcept { return hidden_neurons_; }
  bool has_dropout() const noexcept;

  friend bool operator==(const Mlp& a, const Mlp& b) { return a.layers_ == b.layers_; }

 private:
  std::vector<DenseLayer> layers_;
  std::size_t hidden_neurons_ = 0;
};

/// Post-activation values of every hidden neuron, layers concatenated.
struct ActivationTrace {
  std::vector<double> values;
  /// Start of each hidden layer inside `values`, plus a final end offset.
  std::vector<std::size_t> layer_offsets;

  std::size_t size() const noexcept { return values.size(); }
};

/// Turns on inverted dropout for one forward pass.
struct DropoutSampling {
  std::uint64_t seed = 0;
  /// Replaces every hidden layer's rate when set.
  std::optional<double> rate_override;
};

struct ForwardResult {
  std::vector<double> probabilities;
  ActivationTrace trace;
};

ForwardResult forward(const Mlp& model, const Image& image,
                      const std::optional<DropoutSampling>& dropout = std::nullopt);

/// Softmax output only; skips building the trace.
std::vector<double> probabilities(const Mlp& model, const Image& image,
                                  const std::optional<DropoutSampling>& dropout = std::nullopt);

/// Index of the largest element, lowest index on ties.
std::size_t argmax(std::span<const double> values);

/// Deterministic (dropout off) class prediction.
std::size_t predict(const Mlp& model, const Image& image);

/// MC-dropout certainty: mean of `n_samples` dropout softmax vectors, then
/// its largest component. Sample s draws its masks from
/// derive_seed(seed, {s}).
double certainty(const Mlp& model, const Image& image, std::size_t n_samples,
                 std::uint64_t seed);

/// Cross-entropy -log p[label] with dropout off.
double cross_entropy(const Mlp& model, std::span<const double> input, std::size_t label);

struct LayerGradient {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> input;
  /// Empty unless parameter gradients were requested.
  std::vector<LayerGradient> layers;
};

/// Backpropagates cross-entropy through the network. With `dropout` set the
/// same masks as forward() with that sampling are used.
LossGradient loss_gradient(const Mlp& model, std::span<const double> input, std::size_t label,
                           bool with_parameters,
                           const std::optional<DropoutSampling>& dropout = std::nullopt);

}  // namespace hmrs
