// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hmrs {

/// H x W x C image, row-major with interleaved channels, values in [0, 1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<double> data;

  Image() = default;
  Image(std::size_t h, std::size_t w, std::size_t c = 1, double fill = 0.0)
      : height(h), width(w), channels(c), data(h * w * c, fill) {}

  std::size_t size() const noexcept { return data.size(); }

  double& at(std::size_t y, std::size_t x, std::size_t c = 0) {
    return data[(y * width + x) * channels + c];
  }
  double at(std::size_t y, std::size_t x, std::size_t c = 0) const {
    return data[(y * width + x) * channels + c];
  }

  bool same_shape(const Image& other) const noexcept {
    return height == other.height && width == other.width && channels == other.channels;
  }

  /// Clamps every element to [0, 1]; non-finite values become 0.
  void clamp();

  /// Throws unless data length matches the dimensions and every value is a
  /// finite number in [0, 1].
  void validate() const;

  friend bool operator==(const Image&, const Image&) = default;
};

struct Dataset {
  std::vector<Image> images;
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return images.size(); }
  bool empty() const noexcept { return images.empty(); }

  /// Checks equal lengths, label range and shared image dimensions.
  void validate() const;

  Dataset subset(std::span<const std::size_t> indices) const;
};

}  // namespace hmrs
