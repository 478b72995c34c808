// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hmrs/error.hpp"
#include "hmrs/parallel.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

void UncertaintySettings::validate() const {
  require(grid_step > 0.0 && grid_step <= 1.0, Errc::InvalidArgument, "grid_step must lie in (0,1]");
  require(search_samples >= 1 && final_samples >= 1 && ranking_samples >= 1,
          Errc::InvalidArgument, "MC sample counts must be >= 1");
  require(tolerance >= 0.0, Errc::InvalidArgument, "tolerance must be >= 0");
  require(gating_inputs >= 1, Errc::InvalidArgument, "gating_inputs must be >= 1");
}

std::vector<double> certainty_grid(double step) {
  require(step > 0.0 && step <= 1.0, Errc::InvalidArgument, "grid step must lie in (0,1]");
  const auto intervals = static_cast<std::size_t>(std::llround(1.0 / step));
  require(std::abs(static_cast<double>(intervals) * step - 1.0) < 1e-9, Errc::InvalidArgument,
          "grid step must divide 1");
  std::vector<double> grid(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    grid[k] = static_cast<double>(k) / static_cast<double>(intervals);
  }
  return grid;
}

std::vector<double> certainties(const Mlp& model, std::span<const Image> images,
                                std::span<const std::size_t> stream_ids, std::size_t n_samples,
                                std::uint64_t seed, std::size_t threads) {
  require(images.size() == stream_ids.size(), Errc::LengthMismatch,
          "one stream id per image required");
  std::vector<double> out(images.size());
  parallel_for(images.size(), threads, [&](std::size_t i) {
    out[i] = certainty(model, images[i], n_samples, derive_seed(seed, {stream_ids[i]}));
  });
  return out;
}

CertaintyProfile profile_from_certainties(std::span<const double> certainty_values, double step) {
  require(!certainty_values.empty(), Errc::EmptyDataset, "profile of an empty set");
  CertaintyProfile p;
  p.thresholds = certainty_grid(step);
  std::vector<double> sorted(certainty_values.begin(), certainty_values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  p.fractions.reserve(p.thresholds.size());
  for (double t : p.thresholds) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), t);
    p.fractions.push_back(static_cast<double>(sorted.end() - first) / n);
  }
  return p;
}

CertaintyProfile profile(const Mlp& model, const Dataset& data, std::size_t n_samples,
                         std::uint64_t seed, double step, std::size_t threads) {
  require(!data.empty(), Errc::EmptyDataset, "profile of an empty dataset");
  std::vector<std::size_t> ids(data.size());
  std::iota(ids.begin(), ids.end(), 0);
  return profile_from_certainties(certainties(model, data.images, ids, n_samples, seed, threads), step);
}

ValidityBound lower_bound(const CertaintyProfile& sound, const CertaintyProfile& noise) {
  require(sound.thresholds == noise.thresholds && sound.fractions.size() == sound.thresholds.size() &&
              noise.fractions.size() == noise.thresholds.size(),
          Errc::GridMismatch, "sound and noise profiles use different grids");
  ValidityBound b;
  b.thresholds = sound.thresholds;
  b.bound.resize(b.thresholds.size());
  for (std::size_t k = 0; k < b.thresholds.size(); ++k) {
    const double t3 = b.thresholds[k] * b.thresholds[k] * b.thresholds[k];
    b.bound[k] = 0.5 * ((1.0 - t3) * sound.fractions[k] + (1.0 + t3) * noise.fractions[k]);
  }
  return b;
}

bool is_valid(const CertaintyProfile& profile, const ValidityBound& bound, double tolerance) {
  require(profile.thresholds == bound.thresholds && profile.fractions.size() == bound.bound.size(),
          Errc::GridMismatch, "profile and bound use different grids");
  for (std::size_t k = 0; k < bound.bound.size(); ++k) {
    if (profile.fractions[k] < bound.bound[k] - tolerance) return false;
  }
  return true;
}

Dataset noise_dataset(std::size_t height, std::size_t width, std::size_t channels, std::size_t n,
                      std::uint64_t seed, std::size_t num_classes) {
  require(n > 0, Errc::InvalidArgument, "noise dataset needs at least one image");
  require(height > 0 && width > 0 && channels > 0, Errc::DimensionMismatch, "empty image shape");
  Dataset data;
  data.num_classes = std::max<std::size_t>(num_classes, 1);
  data.images.reserve(n);
  data.labels.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, {i}));
    Image img(height, width, channels);
    for (double& v : img.data) v = rng.uniform();
    data.images.push_back(std::move(img));
  }
  return data;
}

ValidityGate::ValidityGate(const Mlp& model, std::vector<Image> images,
                           std::vector<std::size_t> stream_ids, ValidityBound bound,
                           std::size_t n_samples, std::uint64_t seed, double tolerance,
                           const BoundsTable& bounds)
    : model_(&model),
      images_(std::move(images)),
      stream_ids_(std::move(stream_ids)),
      bound_(std::move(bound)),
      n_samples_(n_samples),
      seed_(seed),
      tolerance_(tolerance),
      bounds_(&bounds) {
  require(!images_.empty(), Errc::EmptySubset, "validity gate needs source images");
  require(images_.size() == stream_ids_.size(), Errc::LengthMismatch, "one stream id per image required");
  require(bound_.thresholds.size() >= 2, Errc::GridMismatch, "bound grid too small");
  step_ = bound_.thresholds[1] - bound_.thresholds[0];
}

CertaintyProfile ValidityGate::chain_profile(const HmrChain& chain) const {
  std::vector<Image> transformed;
  transformed.reserve(images_.size());
  for (const Image& img : images_) transformed.push_back(apply_chain(chain, img, *bounds_));
  auto p = profile_from_certainties(certainties(*model_, transformed, stream_ids_, n_samples_, seed_), step_);
  // Rebuild on the bound's exact grid so comparisons never trip on rounding.
  require(p.thresholds.size() == bound_.thresholds.size(), Errc::GridMismatch,
          "bound grid is not a regular grid");
  p.thresholds = bound_.thresholds;
  return p;
}

bool ValidityGate::chain_valid(const HmrChain& chain) const {
  const std::string key = chain_key(chain);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const bool ok = is_valid(chain_profile(chain), bound_, tolerance_);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, ok);
  return ok;
}

bool ValidityGate::feasible(const Individual& individual) const {
  for (const HmrChain& chain : individual.chains) {
    if (!chain.is_identity() && !chain_valid(chain)) return false;
  }
  return true;
}

bool set_feasibility(Individual& individual, const Mlp& model, const Dataset& subset,
                     const ValidityBound& bound, std::size_t n_samples, std::uint64_t seed,
                     double tolerance, const BoundsTable& bounds) {
  require(!subset.empty(), Errc::EmptySubset, "feasibility over an empty subset");
  std::vector<std::size_t> ids(subset.size());
  std::iota(ids.begin(), ids.end(), 0);
  ValidityGate gate(model, subset.images, ids, bound, n_samples, seed, tolerance, bounds);
  const bool ok = gate.feasible(individual);
  if (individual.objectives) individual.objectives->feasible = ok;
  return ok;
}

std::vector<std::size_t> most_uncertain(const Mlp& model, const Dataset& data,
                                        std::span<const Individual> sets, double p,
                                        std::size_t subset_size, std::uint64_t seed,
                                        std::size_t n_samples, const BoundsTable& bounds,
                                        std::size_t threads) {
  require(p >= 0.0 && p <= 1.0, Errc::InvalidArgument, "uncertain fraction must lie in [0,1]");
  require(subset_size <= data.size(), Errc::SubsetLargerThanDataset,
          "subset of " + std::to_string(subset_size) + " from " + std::to_string(data.size()) + " inputs");
  const auto wanted = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(subset_size) - 1e-9));
  const std::size_t uncertain = std::min(wanted, subset_size);

  std::vector<std::size_t> chosen;
  if (uncertain > 0) {
    // Distinct chains only; an identity chain scores the untouched input.
    std::vector<HmrChain> chains;
    std::set<std::string> seen;
    for (const Individual& ind : sets) {
      for (const HmrChain& c : ind.chains) {
        const HmrChain probe = c.is_identity() ? HmrChain{} : c;
        if (seen.insert(chain_key(probe)).second) chains.push_back(probe);
      }
    }
    if (chains.empty()) chains.push_back(HmrChain{});

    std::vector<double> score(data.size());
    parallel_for(data.size(), threads, [&](std::size_t i) {
      double lowest = 1.0;
      for (const HmrChain& c : chains) {
        const Image img = c.nodes.empty() ? data.images[i] : apply_chain(c, data.images[i], bounds);
        lowest = std::min(lowest, certainty(model, img, n_samples, derive_seed(seed, {i})));
      }
      score[i] = lowest;
    });
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(uncertain));
  }

  std::vector<char> taken(data.size(), 0);
  for (std::size_t i : chosen) taken[i] = 1;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  Rng rng(derive_seed(seed, {0x5b5e7}));
  rng.shuffle(std::span(rest));
  chosen.insert(chosen.end(), rest.begin(),
                rest.begin() + static_cast<std::ptrdiff_t>(subset_size - chosen.size()));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace hmrs
