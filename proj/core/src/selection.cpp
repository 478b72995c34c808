// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hmrs/error.hpp"
#include "hmrs/parallel.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

namespace {

constexpr std::uint64_t kNoiseTag = 0x401e;
constexpr std::uint64_t kMcTag = 0x3c3c;
constexpr std::uint64_t kBankTag = 0xba4c;
constexpr std::uint64_t kSubsetTag = 0x5b5e;
constexpr std::uint64_t kSearchTag = 0x6e5a;
constexpr std::uint64_t kGatingTag = 0x9a7e;

std::size_t subset_size(const SearchConfig& config, std::size_t n) {
  const auto size = static_cast<std::size_t>(std::llround(config.subset_fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(size, 1, n);
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span(all));
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

// Gating inputs: a seeded sample of the step subset, keeping calibration
// indices as dropout stream ids.
ValidityGate make_gate(const Mlp& model, const Dataset& calibration,
                       const std::vector<std::size_t>& subset, const SelectionSettings& s,
                       const ValidityBound& bound, std::uint64_t mc_seed, std::uint64_t seed) {
  std::vector<std::size_t> ids = subset;
  if (ids.size() > s.uncertainty.gating_inputs) {
    Rng rng(seed);
    rng.shuffle(std::span(ids));
    ids.resize(s.uncertainty.gating_inputs);
    std::sort(ids.begin(), ids.end());
  }
  std::vector<Image> images;
  images.reserve(ids.size());
  for (std::size_t i : ids) images.push_back(calibration.images[i]);
  return ValidityGate(model, std::move(images), std::move(ids), bound, s.uncertainty.search_samples,
                      mc_seed, s.uncertainty.tolerance, s.bounds);
}

std::vector<Individual> unique_members(const std::vector<Individual>& members) {
  std::vector<Individual> out;
  for (const Individual& m : members) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Individual& o) { return o.chains == m.chains; });
    if (!seen) out.push_back(Individual{m.chains, {}});
  }
  return out;
}

}  // namespace

RunSeeds::RunSeeds(std::uint64_t master)
    : noise(derive_seed(master, {kNoiseTag})),
      mc(derive_seed(master, {kMcTag})),
      bank(derive_seed(master, {kBankTag})) {}

ValidityReference build_validity_reference(const Mlp& model, const Dataset& calibration,
                                           const Dataset& noise, std::size_t n_samples,
                                           std::uint64_t mc_seed, double grid_step,
                                           std::size_t threads) {
  ValidityReference ref;
  ref.sound = profile(model, calibration, n_samples, mc_seed, grid_step, threads);
  ref.noise = profile(model, noise, n_samples, mc_seed, grid_step, threads);
  ref.bound = lower_bound(ref.sound, ref.noise);
  return ref;
}

Dataset reference_noise(const Dataset& calibration, const UncertaintySettings& settings,
                        std::uint64_t master_seed) {
  require(!calibration.empty(), Errc::EmptyDataset, "calibration set is empty");
  const Image& shape = calibration.images.front();
  const std::size_t n = settings.noise_count ? settings.noise_count : calibration.size();
  return noise_dataset(shape.height, shape.width, shape.channels, n, RunSeeds(master_seed).noise,
                       calibration.num_classes);
}

std::vector<ObjectiveVector> evaluate_sets(const Mlp& model, const Dataset& data,
                                           std::span<const Individual> sets,
                                           const SelectionSettings& settings,
                                           const ValidityBound& bound, std::size_t n_samples,
                                           std::uint64_t mc_seed, const ReferenceBank* bank) {
  Evaluator evaluator(model, data, settings.coverage, settings.bounds, bank);
  std::vector<std::size_t> ids(data.size());
  std::iota(ids.begin(), ids.end(), 0);
  ValidityGate gate(model, data.images, ids, bound, n_samples, mc_seed, settings.uncertainty.tolerance,
                    settings.bounds);
  std::vector<ObjectiveVector> out(sets.size());
  parallel_for(sets.size(), settings.search.threads, [&](std::size_t i) {
    out[i] = evaluator.evaluate(sets[i]);
    out[i].feasible = gate.feasible(sets[i]);
  });
  return out;
}

SelectionResult select_relations(const Mlp& model, const Dataset& calibration,
                                 const SelectionSettings& settings,
                                 const std::optional<StepRecord>& resume,
                                 const StepCallback& on_step) {
  settings.search.validate();
  settings.coverage.validate();
  settings.uncertainty.validate();
  require(!calibration.empty(), Errc::EmptyDataset, "calibration set is empty");
  calibration.validate();

  const SearchConfig& cfg = settings.search;
  const RunSeeds seeds(cfg.seed);
  const Dataset noise = reference_noise(calibration, settings.uncertainty, cfg.seed);

  SelectionResult result;
  result.search_reference = build_validity_reference(model, calibration, noise,
                                                     settings.uncertainty.search_samples, seeds.mc,
                                                     settings.uncertainty.grid_step, cfg.threads);

  std::optional<ReferenceBank> bank;
  if (settings.coverage.criterion == CoverageCriterion::DSA) {
    bank = build_reference_bank(model, calibration, settings.coverage.dsa_bank_cap, seeds.bank);
  }
  const ReferenceBank* bank_ptr = bank ? &*bank : nullptr;

  const std::size_t size = subset_size(cfg, calibration.size());
  std::size_t first_step = 0;
  std::vector<Individual> seed_population;
  std::vector<std::size_t> subset;
  auto next_subset = [&](std::size_t step, const ParetoFront& front) {
    return most_uncertain(model, calibration, front.members, cfg.uncertain_fraction, size,
                          derive_seed(cfg.seed, {kSubsetTag, step}),
                          settings.uncertainty.ranking_samples, settings.bounds, cfg.threads);
  };

  if (resume) {
    require(resume->step + 1 < cfg.steps, Errc::InvalidArgument,
            "checkpoint is already at the final step");
    first_step = resume->step + 1;
    seed_population = resume->front.members;
    subset = next_subset(resume->step, resume->front);
  } else {
    subset = random_subset(calibration.size(), size, derive_seed(cfg.seed, {kSubsetTag, 0xf0}));
  }

  for (std::size_t step = first_step; step < cfg.steps; ++step) {
    const Dataset sub = calibration.subset(subset);
    Evaluator evaluator(model, sub, settings.coverage, settings.bounds, bank_ptr);
    const ValidityGate gate = make_gate(model, calibration, subset, settings,
                                        result.search_reference.bound, seeds.mc,
                                        derive_seed(cfg.seed, {kGatingTag, step}));
    const ObjectiveFn objective = [&](const Individual& ind) {
      ObjectiveVector v = evaluator.evaluate(ind);
      v.feasible = gate.feasible(ind);
      return v;
    };
    StepRecord record;
    record.step = step;
    record.subset = subset;
    record.front = nsga2(objective, cfg, settings.bounds, std::move(seed_population),
                         derive_seed(cfg.seed, {kSearchTag, step}));
    if (on_step) on_step(record);
    if (step + 1 < cfg.steps) subset = next_subset(step, record.front);
    seed_population = record.front.members;
    result.steps.push_back(std::move(record));
  }

  // Final verification on the whole calibration set.
  result.final_reference = build_validity_reference(model, calibration, noise,
                                                    settings.uncertainty.final_samples, seeds.mc,
                                                    settings.uncertainty.grid_step, cfg.threads);
  std::vector<Individual> candidates = unique_members(seed_population);
  const auto objectives = evaluate_sets(model, calibration, candidates, settings,
                                        result.final_reference.bound,
                                        settings.uncertainty.final_samples, seeds.mc, bank_ptr);
  std::vector<Individual> verified;
  std::vector<ObjectiveVector> verified_objectives;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].objectives = objectives[i];
    if (objectives[i].feasible) {
      verified.push_back(candidates[i]);
      verified_objectives.push_back(objectives[i]);
    } else {
      ++result.dropped_infeasible;
    }
  }
  result.final_front.evaluations = candidates.size();
  if (verified.empty()) {
    result.final_front.feasible_empty = true;
    return result;
  }
  const auto fronts = nondominated_sort(verified_objectives);
  for (std::size_t i : fronts.front()) {
    result.final_front.members.push_back(verified[i]);
  }
  std::vector<ObjectiveVector> front_objectives;
  for (const Individual& m : result.final_front.members) front_objectives.push_back(*m.objectives);
  result.knee = knee_point(front_objectives);
  return result;
}

}  // namespace hmrs
