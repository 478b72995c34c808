// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "hmrs/image.hpp"

namespace hmrs {

inline constexpr unsigned kIdxImagesMagic = 0x00000803;
inline constexpr unsigned kIdxLabelsMagic = 0x00000801;

/// Big-endian IDX images (uint8, N x H x W) scaled to [0, 1].
std::vector<Image> load_idx_images(const std::filesystem::path& path);
std::vector<std::size_t> load_idx_labels(const std::filesystem::path& path);

/// num_classes is max(label) + 1 unless a larger value is given.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 std::size_t num_classes = 0);

/// Writes single-channel images, quantised to uint8 by rounding.
void save_idx(const Dataset& data, const std::filesystem::path& images,
              const std::filesystem::path& labels);

}  // namespace hmrs
