// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>

#include "hmrs/error.hpp"
#include "hmrs/search.hpp"

namespace hmrs {

void SearchConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require(population >= 2, Errc::InvalidArgument, "population must be >= 2");
  require(steps >= 1, Errc::InvalidArgument, "steps must be >= 1");
  require(unit(uncertain_fraction), Errc::InvalidArgument, "uncertain_fraction must lie in [0,1]");
  require(subset_fraction > 0.0 && subset_fraction <= 1.0, Errc::InvalidArgument,
          "subset_fraction must lie in (0,1]");
  require(unit(crossover_rate) && unit(mutation_rate), Errc::InvalidArgument,
          "crossover and mutation rates must lie in [0,1]");
  require(unit(mutation_mix.change) && unit(mutation_mix.nullify) && unit(mutation_mix.reinit),
          Errc::InvalidArgument, "mutation mix entries must lie in [0,1]");
  require(std::abs(mutation_mix.change + mutation_mix.nullify + mutation_mix.reinit - 1.0) < 1e-9,
          Errc::InvalidArgument, "mutation mix must sum to 1");
  require(max_chains >= 1 && max_depth >= 1, Errc::InvalidArgument,
          "max_chains and max_depth must be >= 1");
  require(threads >= 1, Errc::InvalidArgument, "threads must be >= 1");
}

std::size_t default_evaluations(CoverageCriterion criterion) noexcept {
  return criterion == CoverageCriterion::NC ? 200 : 100;
}

void validate_individual(const Individual& individual, const SearchConfig& config,
                         const BoundsTable& bounds) {
  require(!individual.chains.empty() && individual.chains.size() <= config.max_chains,
          Errc::InvalidArgument,
          "individual holds " + std::to_string(individual.chains.size()) + " chains, budget is " +
              std::to_string(config.max_chains));
  for (const HmrChain& chain : individual.chains) {
    require(!chain.nodes.empty() && chain.nodes.size() <= config.max_depth, Errc::InvalidArgument,
            "chain depth " + std::to_string(chain.nodes.size()) + " outside [1, " +
                std::to_string(config.max_depth) + "]");
    for (const TransformSpec& node : chain.nodes) {
      if (node.active) bounds.check(node);
    }
  }
}

Individual random_individual(const SearchConfig& config, const BoundsTable& bounds, Rng& rng) {
  Individual ind;
  const std::size_t chains = 1 + rng.below(config.max_chains);
  ind.chains.resize(chains);
  for (HmrChain& chain : ind.chains) {
    const std::size_t depth = 1 + rng.below(config.max_depth);
    for (std::size_t d = 0; d < depth; ++d) chain.nodes.push_back(sample_spec(std::nullopt, bounds, rng));
  }
  return ind;
}

std::vector<Individual> random_sets(std::size_t n, const SearchConfig& config,
                                    const BoundsTable& bounds, Rng& rng) {
  std::vector<Individual> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_individual(config, bounds, rng));
  return out;
}

std::pair<Individual, Individual> crossover_at(const Individual& p1, const Individual& p2,
                                               std::size_t cut) {
  Individual c1, c2;
  const std::size_t shorter = std::min(p1.chains.size(), p2.chains.size());
  if (shorter < 2) {
    c1.chains = p1.chains;
    c2.chains = p2.chains;
    return {std::move(c1), std::move(c2)};
  }
  require(cut >= 1 && cut < shorter, Errc::InvalidArgument, "crossover cut out of range");
  const auto k = static_cast<std::ptrdiff_t>(cut);
  c1.chains.assign(p1.chains.begin(), p1.chains.begin() + k);
  c1.chains.insert(c1.chains.end(), p2.chains.begin() + k, p2.chains.end());
  c2.chains.assign(p2.chains.begin(), p2.chains.begin() + k);
  c2.chains.insert(c2.chains.end(), p1.chains.begin() + k, p1.chains.end());
  return {std::move(c1), std::move(c2)};
}

std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2, Rng& rng) {
  const std::size_t shorter = std::min(p1.chains.size(), p2.chains.size());
  if (shorter < 2) return crossover_at(p1, p2, 0);
  return crossover_at(p1, p2, 1 + rng.below(shorter - 1));
}

Individual mutate(const Individual& individual, const SearchConfig& config,
                  const BoundsTable& bounds, Rng& rng) {
  Individual out;
  out.chains = individual.chains;
  const MutationMix& mix = config.mutation_mix;
  for (HmrChain& chain : out.chains) {
    for (TransformSpec& node : chain.nodes) {
      if (!rng.bernoulli(config.mutation_rate)) continue;
      const double pick = rng.uniform();
      if (pick < mix.change) {
        const bool active = node.active;
        node = sample_spec(node.kind, bounds, rng);
        node.active = active;
      } else if (pick < mix.change + mix.nullify) {
        node.active = false;
      } else {
        node = sample_spec(std::nullopt, bounds, rng);
      }
    }
  }
  return out;
}

}  // namespace hmrs
