// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "hmrs/image.hpp"
#include "hmrs/model.hpp"

namespace hmrs {

/// d loss / d pixel for cross-entropy against `label`, dropout off.
std::vector<double> input_gradient(const Mlp& model, const Image& image, std::size_t label);

/// x' = clamp(x + epsilon * sign(grad), 0, 1).
Image fgsm(const Mlp& model, const Image& image, std::size_t label, double epsilon);

Dataset fgsm_dataset(const Mlp& model, const Dataset& data, double epsilon);

}  // namespace hmrs
