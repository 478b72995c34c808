// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "hmrs/individual.hpp"
#include "hmrs/metrics.hpp"
#include "hmrs/rng.hpp"
#include "hmrs/transforms.hpp"

namespace hmrs {

/// Probabilities of the three mutation sub-operators.
struct MutationMix {
  double change = 0.7;
  double nullify = 0.2;
  double reinit = 0.1;
};

struct SearchConfig {
  std::size_t population = 50;
  /// Objective evaluations per NSGA-II run, initial population included.
  std::size_t evaluations = 200;
  /// Optional cap on generations per run; 0 disables it.
  std::size_t max_generations = 0;
  /// Number of NSGA-II restarts.
  std::size_t steps = 5;
  /// Share of each restart subset drawn from the most uncertain inputs.
  double uncertain_fraction = 0.04;
  /// Restart subset size as a share of the calibration set.
  double subset_fraction = 0.10;
  double crossover_rate = 0.8;
  double mutation_rate = 0.2;
  MutationMix mutation_mix;
  /// Budget K: chains per individual.
  std::size_t max_chains = 5;
  /// Depth D: relations per chain.
  std::size_t max_depth = 3;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  void validate() const;
};

/// 200 evaluations for NC coverage, 100 for DSA.
std::size_t default_evaluations(CoverageCriterion criterion) noexcept;

/// Throws unless the individual respects the budget and depth limits and
/// every active spec lies inside `bounds`.
void validate_individual(const Individual& individual, const SearchConfig& config,
                         const BoundsTable& bounds);

/// Chain count uniform in [1, K], chain lengths uniform in [1, D].
Individual random_individual(const SearchConfig& config, const BoundsTable& bounds, Rng& rng);
std::vector<Individual> random_sets(std::size_t n, const SearchConfig& config,
                                    const BoundsTable& bounds, Rng& rng);

/// Single-point crossover on the chain lists. With cut k drawn from
/// [1, min(|p1|,|p2|) - 1], children are p1[:k] + p2[k:] and p2[:k] + p1[k:].
/// Parents with a single chain are copied.
std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2, Rng& rng);
/// Same with an explicit cut point.
std::pair<Individual, Individual> crossover_at(const Individual& p1, const Individual& p2,
                                               std::size_t cut);

/// Each node mutates with probability mutation_rate: resample its parameters
/// (kind kept), nullify it, or re-initialise kind and parameters. Chain
/// count and lengths never change.
Individual mutate(const Individual& individual, const SearchConfig& config,
                  const BoundsTable& bounds, Rng& rng);

/// Feasible beats infeasible; otherwise Pareto dominance with coverage and
/// kill ratio maximised and similarity minimised.
bool constrained_dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept;

/// Fronts of a population, best first; members within a front by index.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectiveVector> objectives);

/// Crowding distance of each member of one front.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

struct ParetoFront {
  std::vector<Individual> members;
  /// Set when no feasible individual existed; members are then the
  /// best infeasible ones.
  bool feasible_empty = false;
  std::size_t evaluations = 0;
  std::size_t generations = 0;
};

using ObjectiveFn = std::function<ObjectiveVector(const Individual&)>;
/// Called after each generation's survival step with the new population.
using GenerationHook = std::function<void(std::size_t generation, std::span<const Individual>)>;

/// Constrained NSGA-II: binary tournaments on (rank, crowding), elitist
/// (mu + lambda) survival, stopping once `config.evaluations` objective
/// evaluations are spent. `init_pop` is truncated or padded with random
/// individuals to the population size; every member is (re)evaluated.
ParetoFront nsga2(const ObjectiveFn& objective, const SearchConfig& config,
                  const BoundsTable& bounds, std::vector<Individual> init_pop, std::uint64_t seed,
                  const GenerationHook& hook = {});

/// Index of the member closest to the ideal point in Chebyshev distance
/// after min-max normalising each objective over the set. Ties go to the
/// smaller summed normalised distance, then to the lower index.
std::size_t knee_point(std::span<const ObjectiveVector> objectives);

}  // namespace hmrs
