// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hmrs/model.hpp"

namespace hmrs {

inline constexpr int kModelFormatVersion = 1;

// JSON weights file:
//   {"version":1,"input_dim":64,"num_classes":10,
//    "layers":[{"w":[[...],...],"b":[...],"act":"relu","dropout":0.25}, ...]}
// Doubles are written in shortest round-trip form, so save/load is exact.

std::string serialize_model(const Mlp& model);
Mlp parse_model(std::string_view text);

void save_model(const Mlp& model, const std::filesystem::path& path);
Mlp load_model(const std::filesystem::path& path);

}  // namespace hmrs
