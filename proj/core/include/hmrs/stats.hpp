// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hmrs/individual.hpp"

namespace hmrs {

enum class Alternative { Greater, Less, TwoSided };

struct MannWhitneyResult {
  /// U statistic of the first sample: #{a > b} + 0.5 #{a = b}.
  double u = 0.0;
  double p = 1.0;
  bool exact = false;
};

/// Largest sample size for which the exact permutation distribution is used.
inline constexpr std::size_t kExactMannWhitneyLimit = 8;

/// Mann-Whitney U test. Exact (tie-aware permutation distribution of the
/// midrank sum) when both samples have at most 8 values, otherwise normal
/// approximation with tie and continuity correction. "Greater" tests
/// whether the first sample tends to be larger.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 Alternative alternative);

enum class EffectMagnitude { Negligible, Small, Medium, Large };
std::string_view magnitude_name(EffectMagnitude m) noexcept;

struct CliffsDelta {
  double delta = 0.0;
  EffectMagnitude magnitude = EffectMagnitude::Negligible;
};

/// (#{a > b} - #{a < b}) / (|a| |b|); |d| < 0.147 negligible, < 0.33 small,
/// < 0.474 medium, else large.
CliffsDelta cliffs_delta(std::span<const double> a, std::span<const double> b);

enum class Criterion { Coverage, Similarity, KillRatio };
inline constexpr std::array<Criterion, 3> kCriteria = {Criterion::Coverage, Criterion::Similarity,
                                                       Criterion::KillRatio};
std::string_view criterion_name(Criterion c) noexcept;
double criterion_value(const ObjectiveVector& v, Criterion c) noexcept;
/// Direction in which the optimised group is expected to be better.
Alternative better_direction(Criterion c) noexcept;

struct CriterionComparison {
  Criterion criterion = Criterion::Coverage;
  double optimized_mean = 0.0;
  double optimized_sd = 0.0;
  double random_mean = 0.0;
  double random_sd = 0.0;
  MannWhitneyResult test;
  CliffsDelta effect;
};

struct ComparisonReport {
  std::array<CriterionComparison, 3> criteria;
  std::size_t optimized_used = 0;
  std::size_t random_used = 0;
  std::size_t optimized_discarded = 0;
  std::size_t random_discarded = 0;
};

/// One-sided per-criterion tests in the optimised-better direction (greater
/// coverage and kill ratio, lower similarity). Infeasible entries are
/// excluded and counted.
ComparisonReport compare(std::span<const ObjectiveVector> optimized,
                         std::span<const ObjectiveVector> random);

}  // namespace hmrs
