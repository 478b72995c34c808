// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hmrs/image.hpp"
#include "hmrs/selection.hpp"
#include "hmrs/train.hpp"

namespace hmrs {

struct DatasetPaths {
  std::filesystem::path images;
  std::filesystem::path labels;
};

/// Where the synthetic digit splits come from when no IDX files are given.
struct SyntheticData {
  std::uint64_t seed = 7;
  std::size_t train = 1000;
  std::size_t calibration = 750;
  std::size_t test = 750;
};

struct RunConfig {
  std::filesystem::path model = "model.json";
  std::optional<DatasetPaths> train;
  std::optional<DatasetPaths> calibration;
  std::optional<DatasetPaths> test;
  /// Optional out-of-distribution images (labels unused).
  std::optional<std::filesystem::path> ood_images;
  SyntheticData synthetic;

  Architecture architecture = default_architecture();
  TrainOptions training;

  SelectionSettings selection;
  double fgsm_epsilon = 0.2;
  std::size_t random_sets = 30;

  std::filesystem::path output_dir = "hmrs-out";
  std::uint64_t seed = 1;

  /// Range checks on every numeric field plus existence of dataset files.
  void validate() const;
};

/// Parses the flat JSON-with-comments config format. Relative paths resolve
/// against `base_dir`. Unknown keys are rejected.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

enum class Split { Train, Calibration, Test };
std::string_view split_name(Split split) noexcept;

/// The split's IDX files when configured, otherwise its synthetic digits.
Dataset load_split(const RunConfig& config, Split split);

/// The documented default config, comments included.
std::string default_config_text();

}  // namespace hmrs
