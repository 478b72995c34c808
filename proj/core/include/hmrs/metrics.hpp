// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hmrs/image.hpp"
#include "hmrs/individual.hpp"
#include "hmrs/model.hpp"
#include "hmrs/transforms.hpp"

namespace hmrs {

enum class CoverageCriterion { NC, DSA };

struct CoverageConfig {
  CoverageCriterion criterion = CoverageCriterion::NC;
  double nc_threshold = 0.25;
  std::size_t dsa_buckets = 1000;
  double dsa_upper = 2.0;
  /// Reference traces kept for DSA nearest-neighbour search.
  std::size_t dsa_bank_cap = 2000;

  void validate() const;
};

/// Fraction of neurons whose value exceeds `threshold` in at least one trace.
double neuron_coverage(std::span<const ActivationTrace> traces, double threshold);

/// Activation traces indexed by predicted class, plus per-neuron value
/// ranges used to normalise traces for DSA-mode similarity.
struct ReferenceBank {
  std::vector<std::vector<ActivationTrace>> by_class;
  std::vector<double> neuron_min;
  std::vector<double> neuron_max;

  void add(std::size_t predicted, ActivationTrace trace);
  std::size_t size() const noexcept;
};

/// Traces of `reference` (dropout off) grouped by predicted class. When the
/// set is larger than `cap` a uniform subsample of `cap` inputs is used.
ReferenceBank build_reference_bank(const Mlp& model, const Dataset& reference, std::size_t cap,
                                   std::uint64_t seed);

/// Distance-based surprise adequacy. With x_a the nearest same-class
/// reference and x_b the other-class reference nearest to x_a, the score is
/// |t - x_a| / |t - x_b| (Euclidean).
double dsa_score(const ActivationTrace& trace, std::size_t predicted, const ReferenceBank& bank);

/// Fraction of the `buckets` equal-width bins over [0, upper] hit by at
/// least one score. Scores above `upper` fall outside every bin.
double dsa_coverage(std::span<const double> scores, std::size_t buckets, double upper);

/// Mean pairwise distance over the unordered pairs of a trace tuple
/// (original first, then follow-ups), normalised by neuron count so the
/// result lies in [0,1]. NC mode: Hamming distance of traces binarised at
/// nc_threshold. DSA mode: L1 distance of min-max normalised traces, using
/// `ranges` when given and the tuple's own per-neuron range otherwise.
double neuron_similarity(std::span<const ActivationTrace> tuple, const CoverageConfig& config,
                         const ReferenceBank* ranges = nullptr);

/// Fraction of inputs whose prediction changes under at least one chain.
double kill_ratio(const Mlp& model, const Dataset& subset, const Individual& individual,
                  const BoundsTable& bounds = BoundsTable::defaults());

/// Binds a model and an input subset, caching the original forward passes,
/// so many individuals can be scored cheaply. Safe for concurrent evaluate().
class Evaluator {
 public:
  Evaluator(const Mlp& model, const Dataset& subset, CoverageConfig config,
            const BoundsTable& bounds, const ReferenceBank* bank = nullptr);

  /// Objectives with `feasible` left false.
  ObjectiveVector evaluate(const Individual& individual) const;

  /// Coverage of the untransformed subset.
  double baseline_coverage() const;

  const Dataset& subset() const noexcept { return *subset_; }

 private:
  const Mlp* model_;
  const Dataset* subset_;
  CoverageConfig config_;
  const BoundsTable* bounds_;
  const ReferenceBank* bank_;
  std::vector<ActivationTrace> original_traces_;
  std::vector<std::size_t> original_predictions_;
  std::vector<double> original_scores_;
};

ObjectiveVector evaluate(const Mlp& model, const Dataset& subset, const Individual& individual,
                         const CoverageConfig& config,
                         const BoundsTable& bounds = BoundsTable::defaults(),
                         const ReferenceBank* bank = nullptr);

}  // namespace hmrs
