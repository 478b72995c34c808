// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/image.hpp"

#include <cmath>
#include <string>

#include "hmrs/error.hpp"

namespace hmrs {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::MalformedFile: return "MalformedFile";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::EmptyTraceSet: return "EmptyTraceSet";
    case Errc::MissingClassBank: return "MissingClassBank";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::SubsetLargerThanDataset: return "SubsetLargerThanDataset";
    case Errc::EmptySample: return "EmptySample";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

void Image::clamp() {
  for (double& v : data) {
    if (!std::isfinite(v)) v = 0.0;
    else if (v < 0.0) v = 0.0;
    else if (v > 1.0) v = 1.0;
  }
}

void Image::validate() const {
  require(data.size() == height * width * channels, Errc::DimensionMismatch,
          "image data length " + std::to_string(data.size()) + " does not match " +
              std::to_string(height) + "x" + std::to_string(width) + "x" +
              std::to_string(channels));
  for (double v : data) {
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, Errc::InvalidArgument,
            "pixel value outside [0,1]");
  }
}

void Dataset::validate() const {
  require(images.size() == labels.size(), Errc::CountMismatch,
          std::to_string(images.size()) + " images but " + std::to_string(labels.size()) +
              " labels");
  for (std::size_t i = 0; i < images.size(); ++i) {
    require(labels[i] < num_classes, Errc::InvalidArgument,
            "label " + std::to_string(labels[i]) + " >= num_classes " +
                std::to_string(num_classes));
    require(images[i].same_shape(images.front()), Errc::DimensionMismatch,
            "image " + std::to_string(i) + " differs in shape from image 0");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.num_classes = num_classes;
  out.images.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    require(i < images.size(), Errc::InvalidArgument, "subset index out of range");
    out.images.push_back(images[i]);
    out.labels.push_back(labels[i]);
  }
  return out;
}

}  // namespace hmrs
