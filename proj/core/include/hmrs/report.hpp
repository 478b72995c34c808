// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hmrs/individual.hpp"
#include "hmrs/selection.hpp"
#include "hmrs/stats.hpp"
#include "hmrs/uncertainty.hpp"

namespace hmrs {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

// Structured text (JSON) for individuals, fronts and step checkpoints.
std::string serialize_individuals(std::span<const Individual> individuals);
std::vector<Individual> parse_individuals(std::string_view text);

std::string serialize_front(const ParetoFront& front, std::optional<std::size_t> knee = std::nullopt);
ParetoFront parse_front(std::string_view text);

std::string serialize_checkpoint(const StepRecord& record, std::uint64_t seed);
/// Returns the record and the seed it was produced with.
std::pair<StepRecord, std::uint64_t> parse_checkpoint(std::string_view text);

// CSV.
/// Header "label,coverage,similarity,kill_ratio,feasible".
std::string objectives_csv(std::span<const ObjectiveVector> rows,
                           std::span<const std::string> labels = {});
std::vector<ObjectiveVector> parse_objectives_csv(std::string_view text);

/// One column per named curve over a shared threshold grid.
std::string curves_csv(std::span<const std::pair<std::string, std::vector<double>>> curves,
                       std::span<const double> thresholds);

std::string comparison_csv(const ComparisonReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace hmrs
