// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hmrs/image.hpp"
#include "hmrs/individual.hpp"
#include "hmrs/model.hpp"
#include "hmrs/transforms.hpp"

namespace hmrs {

struct UncertaintySettings {
  double grid_step = 0.01;
  /// MC-dropout samples for gating during the search.
  std::size_t search_samples = 30;
  /// MC-dropout samples for final verification and reported profiles.
  std::size_t final_samples = 100;
  /// MC-dropout samples when ranking inputs by uncertainty between steps.
  std::size_t ranking_samples = 10;
  /// Slack on the profile-vs-bound comparison.
  double tolerance = 0.01;
  /// Inputs of each step subset used for gating.
  std::size_t gating_inputs = 64;
  /// Size of the uniform-noise reference set; 0 means "same as calibration".
  std::size_t noise_count = 0;

  void validate() const;
};

/// Fraction of inputs whose certainty is >= t, on the grid t = 0, step, ..., 1.
struct CertaintyProfile {
  std::vector<double> thresholds;
  std::vector<double> fractions;
};

/// Pointwise lower bound ½((1 - t³)·u + (1 + t³)·l) of a sound profile u and
/// a noise profile l.
struct ValidityBound {
  std::vector<double> thresholds;
  std::vector<double> bound;
};

std::vector<double> certainty_grid(double step);

/// certainty() of every image; image i draws its dropout masks from the
/// stream derive_seed(seed, {stream_ids[i]}).
std::vector<double> certainties(const Mlp& model, std::span<const Image> images,
                                std::span<const std::size_t> stream_ids, std::size_t n_samples,
                                std::uint64_t seed, std::size_t threads = 1);

CertaintyProfile profile_from_certainties(std::span<const double> certainty_values, double step);

/// Profile of a dataset; input i uses stream id i.
CertaintyProfile profile(const Mlp& model, const Dataset& data, std::size_t n_samples,
                         std::uint64_t seed, double step = 0.01, std::size_t threads = 1);

ValidityBound lower_bound(const CertaintyProfile& sound, const CertaintyProfile& noise);

/// True iff fractions[k] >= bound[k] - tolerance at every grid point.
bool is_valid(const CertaintyProfile& profile, const ValidityBound& bound, double tolerance = 0.01);

/// n images of i.i.d. uniform [0,1] pixels, all labelled 0.
Dataset noise_dataset(std::size_t height, std::size_t width, std::size_t channels, std::size_t n,
                      std::uint64_t seed, std::size_t num_classes = 1);

/// Judges chains against a validity bound on a fixed set of source images.
/// Verdicts are cached by chain_key(); concurrent use is safe.
class ValidityGate {
 public:
  /// stream_ids[i] keys the dropout stream of images[i]; pass the inputs'
  /// calibration indices so an identity chain reproduces the sound profile.
  ValidityGate(const Mlp& model, std::vector<Image> images, std::vector<std::size_t> stream_ids,
               ValidityBound bound, std::size_t n_samples, std::uint64_t seed, double tolerance,
               const BoundsTable& bounds);

  CertaintyProfile chain_profile(const HmrChain& chain) const;
  bool chain_valid(const HmrChain& chain) const;
  /// Every non-identity chain valid; identity chains need no profile.
  bool feasible(const Individual& individual) const;

  const ValidityBound& bound() const noexcept { return bound_; }

 private:
  const Mlp* model_;
  std::vector<Image> images_;
  std::vector<std::size_t> stream_ids_;
  ValidityBound bound_;
  std::size_t n_samples_;
  std::uint64_t seed_;
  double tolerance_;
  const BoundsTable* bounds_;
  double step_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, bool> cache_;
};

/// Computes one profile per chain over `subset`, stores the verdict in
/// individual.objectives->feasible (when objectives exist) and returns it.
bool set_feasibility(Individual& individual, const Mlp& model, const Dataset& subset,
                     const ValidityBound& bound, std::size_t n_samples, std::uint64_t seed,
                     double tolerance = 0.01, const BoundsTable& bounds = BoundsTable::defaults());

/// Builds the next step's subset: the ceil(p * subset_size) inputs with the
/// lowest certainty (minimum over every chain of every set; ties by index),
/// topped up with uniformly drawn other inputs. Returned sorted.
std::vector<std::size_t> most_uncertain(const Mlp& model, const Dataset& data,
                                        std::span<const Individual> sets, double p,
                                        std::size_t subset_size, std::uint64_t seed,
                                        std::size_t n_samples,
                                        const BoundsTable& bounds = BoundsTable::defaults(),
                                        std::size_t threads = 1);

}  // namespace hmrs
