// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hmrs/image.hpp"
#include "hmrs/metrics.hpp"
#include "hmrs/model.hpp"
#include "hmrs/search.hpp"
#include "hmrs/uncertainty.hpp"

namespace hmrs {

struct SelectionSettings {
  SearchConfig search;
  CoverageConfig coverage;
  UncertaintySettings uncertainty;
  BoundsTable bounds;
};

/// Outcome of one NSGA-II restart.
struct StepRecord {
  std::size_t step = 0;
  /// Calibration indices the step optimised on.
  std::vector<std::size_t> subset;
  ParetoFront front;
};

/// Profiles and bounds of the calibration and noise sets at one MC sample
/// count.
struct ValidityReference {
  CertaintyProfile sound;
  CertaintyProfile noise;
  ValidityBound bound;
};

ValidityReference build_validity_reference(const Mlp& model, const Dataset& calibration,
                                           const Dataset& noise, std::size_t n_samples,
                                           std::uint64_t mc_seed, double grid_step,
                                           std::size_t threads = 1);

struct SelectionResult {
  std::vector<StepRecord> steps;
  /// Last step's front re-evaluated and re-verified on the full calibration
  /// set; members failing verification are dropped and counted.
  ParetoFront final_front;
  std::size_t dropped_infeasible = 0;
  /// Index of the balanced member of final_front, when it is non-empty.
  std::optional<std::size_t> knee;
  ValidityReference search_reference;
  ValidityReference final_reference;
};

/// Seeds every stochastic component of a run derives from.
struct RunSeeds {
  std::uint64_t noise;
  std::uint64_t mc;
  std::uint64_t bank;

  explicit RunSeeds(std::uint64_t master);
};

/// Uniform noise set matching the calibration image shape.
Dataset reference_noise(const Dataset& calibration, const UncertaintySettings& settings,
                        std::uint64_t master_seed);

using StepCallback = std::function<void(const StepRecord&)>;

/// Multi-step selection: a random subset first, then NSGA-II restarts on
/// subsets enriched with the inputs the current front is least certain
/// about, each seeded with the previous front. `resume` continues after a
/// stored step and yields the same result as an uninterrupted run.
SelectionResult select_relations(const Mlp& model, const Dataset& calibration,
                                 const SelectionSettings& settings,
                                 const std::optional<StepRecord>& resume = std::nullopt,
                                 const StepCallback& on_step = {});

/// Re-evaluates `sets` on `data` (objectives plus feasibility against the
/// supplied reference at `n_samples`).
std::vector<ObjectiveVector> evaluate_sets(const Mlp& model, const Dataset& data,
                                           std::span<const Individual> sets,
                                           const SelectionSettings& settings,
                                           const ValidityBound& bound, std::size_t n_samples,
                                           std::uint64_t mc_seed,
                                           const ReferenceBank* bank = nullptr);

}  // namespace hmrs
