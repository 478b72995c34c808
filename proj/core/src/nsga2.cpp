// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include "hmrs/error.hpp"
#include "hmrs/parallel.hpp"
#include "hmrs/search.hpp"

namespace hmrs {

namespace {

// Objectives in "smaller is better" form.
std::array<double, 3> minimised(const ObjectiveVector& v) noexcept {
  return {-v.coverage, v.similarity, -v.kill_ratio};
}

struct Ranked {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

Ranked rank_population(std::span<const ObjectiveVector> objectives) {
  Ranked r;
  r.rank.assign(objectives.size(), 0);
  r.crowding.assign(objectives.size(), 0.0);
  const auto fronts = nondominated_sort(objectives);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<ObjectiveVector> members;
    for (std::size_t i : fronts[f]) members.push_back(objectives[i]);
    const auto cd = crowding_distance(members);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      r.rank[fronts[f][k]] = f;
      r.crowding[fronts[f][k]] = cd[k];
    }
  }
  return r;
}

bool better(const Ranked& r, std::size_t a, std::size_t b) {
  if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b];
  if (r.crowding[a] != r.crowding[b]) return r.crowding[a] > r.crowding[b];
  return a < b;
}

std::size_t tournament(const Ranked& r, std::size_t n, Rng& rng) {
  const std::size_t a = rng.below(n);
  const std::size_t b = rng.below(n);
  return better(r, a, b) ? a : b;
}

void evaluate_all(std::vector<Individual>& pop, const ObjectiveFn& objective, std::size_t threads) {
  parallel_for(pop.size(), threads, [&](std::size_t i) { pop[i].objectives = objective(pop[i]); });
}

std::vector<ObjectiveVector> objectives_of(const std::vector<Individual>& pop) {
  std::vector<ObjectiveVector> out;
  out.reserve(pop.size());
  for (const Individual& ind : pop) out.push_back(ind.objectives.value());
  return out;
}

}  // namespace

bool constrained_dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept {
  if (a.feasible != b.feasible) return a.feasible;
  const auto x = minimised(a);
  const auto y = minimised(b);
  bool strictly = false;
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (x[m] > y[m]) return false;
    if (x[m] < y[m]) strictly = true;
  }
  return strictly;
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectiveVector> objectives) {
  require(!objectives.empty(), Errc::InvalidArgument, "cannot sort an empty population");
  const std::size_t n = objectives.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dominators(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (constrained_dominates(objectives[p], objectives[q])) dominated[p].push_back(q);
      else if (constrained_dominates(objectives[q], objectives[p])) ++dominators[p];
    }
    if (dominators[p] == 0) fronts[0].push_back(p);
  }
  for (std::size_t f = 0; !fronts[f].empty(); ++f) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[f]) {
      for (std::size_t q : dominated[p]) {
        if (--dominators[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  require(!front.empty(), Errc::InvalidArgument, "crowding distance of an empty front");
  const std::size_t n = front.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    distance.assign(n, inf);
    return distance;
  }
  std::vector<std::array<double, 3>> values;
  values.reserve(n);
  for (const ObjectiveVector& v : front) values.push_back(minimised(v));
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < 3; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a][m] < values[b][m]; });
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    const double range = values[order.back()][m] - values[order.front()][m];
    if (range <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      distance[order[k]] += (values[order[k + 1]][m] - values[order[k - 1]][m]) / range;
    }
  }
  return distance;
}

ParetoFront nsga2(const ObjectiveFn& objective, const SearchConfig& config,
                  const BoundsTable& bounds, std::vector<Individual> init_pop, std::uint64_t seed,
                  const GenerationHook& hook) {
  config.validate();
  Rng rng(derive_seed(seed, {0x6e5a}));

  std::vector<Individual> pop = std::move(init_pop);
  if (pop.size() > config.population) pop.resize(config.population);
  for (Individual& ind : pop) {
    validate_individual(ind, config, bounds);
    ind.objectives.reset();
  }
  while (pop.size() < config.population) pop.push_back(random_individual(config, bounds, rng));
  evaluate_all(pop, objective, config.threads);

  ParetoFront result;
  result.evaluations = pop.size();
  while (result.evaluations < config.evaluations &&
         (config.max_generations == 0 || result.generations < config.max_generations)) {
    const auto parent_objectives = objectives_of(pop);
    const Ranked ranked = rank_population(parent_objectives);
    const std::size_t n_offspring = std::min(config.population, config.evaluations - result.evaluations);

    std::vector<Individual> offspring;
    offspring.reserve(n_offspring + 1);
    while (offspring.size() < n_offspring) {
      const Individual& a = pop[tournament(ranked, pop.size(), rng)];
      const Individual& b = pop[tournament(ranked, pop.size(), rng)];
      auto children = rng.bernoulli(config.crossover_rate) ? crossover(a, b, rng)
                                                            : std::pair{Individual{a.chains, {}},
                                                                        Individual{b.chains, {}}};
      offspring.push_back(mutate(children.first, config, bounds, rng));
      if (offspring.size() < n_offspring) offspring.push_back(mutate(children.second, config, bounds, rng));
    }
    evaluate_all(offspring, objective, config.threads);
    result.evaluations += offspring.size();

    std::vector<Individual> combined = std::move(pop);
    combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
    const auto combined_objectives = objectives_of(combined);
    const auto fronts = nondominated_sort(combined_objectives);
    std::vector<Individual> survivors;
    survivors.reserve(config.population);
    for (const auto& front : fronts) {
      if (survivors.size() + front.size() <= config.population) {
        for (std::size_t i : front) survivors.push_back(combined[i]);
        continue;
      }
      std::vector<ObjectiveVector> members;
      for (std::size_t i : front) members.push_back(combined_objectives[i]);
      const auto cd = crowding_distance(members);
      std::vector<std::size_t> order(front.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
      for (std::size_t k = 0; survivors.size() < config.population; ++k) {
        survivors.push_back(combined[front[order[k]]]);
      }
      break;
    }
    pop = std::move(survivors);
    ++result.generations;
    if (hook) hook(result.generations, pop);
  }

  const auto final_objectives = objectives_of(pop);
  const auto fronts = nondominated_sort(final_objectives);
  for (std::size_t i : fronts.front()) result.members.push_back(pop[i]);
  result.feasible_empty = !result.members.front().objectives->feasible;
  return result;
}

std::size_t knee_point(std::span<const ObjectiveVector> objectives) {
  require(!objectives.empty(), Errc::InvalidArgument, "knee point of an empty set");
  std::array<double, 3> lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const ObjectiveVector& v : objectives) {
    const auto x = minimised(v);
    for (std::size_t m = 0; m < 3; ++m) {
      lo[m] = std::min(lo[m], x[m]);
      hi[m] = std::max(hi[m], x[m]);
    }
  }
  // Chebyshev distance to the ideal point; ties (common when one objective
  // takes only two values) go to the smaller summed distance, then index.
  std::size_t best = 0;
  double best_max = std::numeric_limits<double>::infinity();
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const auto x = minimised(objectives[i]);
    double d_max = 0.0;
    double d_sum = 0.0;
    for (std::size_t m = 0; m < 3; ++m) {
      const double range = hi[m] - lo[m];
      if (range <= 0.0) continue;
      const double d = (x[m] - lo[m]) / range;
      d_max = std::max(d_max, d);
      d_sum += d;
    }
    if (d_max < best_max || (d_max == best_max && d_sum < best_sum)) {
      best_max = d_max;
      best_sum = d_sum;
      best = i;
    }
  }
  return best;
}

}  // namespace hmrs
