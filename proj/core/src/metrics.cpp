// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hmrs/error.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

void CoverageConfig::validate() const {
  require(nc_threshold >= 0.0, Errc::InvalidArgument, "nc_threshold must be >= 0");
  require(dsa_buckets >= 1, Errc::InvalidArgument, "dsa_buckets must be >= 1");
  require(dsa_upper > 0.0, Errc::InvalidArgument, "dsa_upper must be > 0");
  require(dsa_bank_cap >= 1, Errc::InvalidArgument, "dsa_bank_cap must be >= 1");
}

double neuron_coverage(std::span<const ActivationTrace> traces, double threshold) {
  require(!traces.empty(), Errc::EmptyTraceSet, "coverage of an empty trace set");
  const std::size_t n = traces.front().size();
  require(n > 0, Errc::EmptyTraceSet, "traces hold no neurons");
  std::vector<char> hit(n, 0);
  for (const ActivationTrace& t : traces) {
    require(t.size() == n, Errc::LengthMismatch, "traces differ in length");
    for (std::size_t j = 0; j < n; ++j) hit[j] |= t.values[j] > threshold;
  }
  const auto count = std::count(hit.begin(), hit.end(), 1);
  return static_cast<double>(count) / static_cast<double>(n);
}

void ReferenceBank::add(std::size_t predicted, ActivationTrace trace) {
  if (neuron_min.empty()) {
    neuron_min = trace.values;
    neuron_max = trace.values;
  } else {
    require(trace.size() == neuron_min.size(), Errc::LengthMismatch, "bank traces differ in length");
    for (std::size_t j = 0; j < trace.size(); ++j) {
      neuron_min[j] = std::min(neuron_min[j], trace.values[j]);
      neuron_max[j] = std::max(neuron_max[j], trace.values[j]);
    }
  }
  if (by_class.size() <= predicted) by_class.resize(predicted + 1);
  by_class[predicted].push_back(std::move(trace));
}

std::size_t ReferenceBank::size() const noexcept {
  std::size_t n = 0;
  for (const auto& c : by_class) n += c.size();
  return n;
}

ReferenceBank build_reference_bank(const Mlp& model, const Dataset& reference, std::size_t cap,
                                   std::uint64_t seed) {
  require(!reference.empty(), Errc::EmptyDataset, "reference set is empty");
  std::vector<std::size_t> order(reference.size());
  std::iota(order.begin(), order.end(), 0);
  if (order.size() > cap) {
    Rng rng(derive_seed(seed, {0xba4c}));
    rng.shuffle(std::span(order));
    order.resize(cap);
    std::sort(order.begin(), order.end());
  }
  ReferenceBank bank;
  bank.by_class.resize(model.num_classes());
  for (std::size_t i : order) {
    ForwardResult r = forward(model, reference.images[i]);
    bank.add(argmax(r.probabilities), std::move(r.trace));
  }
  return bank;
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

double dsa_score(const ActivationTrace& trace, std::size_t predicted, const ReferenceBank& bank) {
  std::size_t populated = 0;
  for (const auto& c : bank.by_class) populated += !c.empty();
  require(populated >= 2, Errc::MissingClassBank, "DSA needs reference traces for two classes");
  require(predicted < bank.by_class.size() && !bank.by_class[predicted].empty(),
          Errc::MissingClassBank, "no reference traces for class " + std::to_string(predicted));

  const ActivationTrace* nearest = nullptr;
  double dist_a = std::numeric_limits<double>::infinity();
  for (const ActivationTrace& ref : bank.by_class[predicted]) {
    require(ref.size() == trace.size(), Errc::LengthMismatch, "trace length differs from bank");
    const double d = euclidean(trace.values, ref.values);
    if (d < dist_a) {
      dist_a = d;
      nearest = &ref;
    }
  }
  const ActivationTrace* other = nullptr;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < bank.by_class.size(); ++c) {
    if (c == predicted) continue;
    for (const ActivationTrace& ref : bank.by_class[c]) {
      const double d = euclidean(nearest->values, ref.values);
      if (d < gap) {
        gap = d;
        other = &ref;
      }
    }
  }
  const double dist_b = euclidean(trace.values, other->values);
  if (dist_a == 0.0) return 0.0;
  if (dist_b == 0.0) return std::numeric_limits<double>::infinity();
  return dist_a / dist_b;
}

double dsa_coverage(std::span<const double> scores, std::size_t buckets, double upper) {
  require(buckets >= 1 && upper > 0.0, Errc::InvalidArgument, "bad DSA bucket layout");
  std::vector<char> hit(buckets, 0);
  for (double s : scores) {
    if (!(s >= 0.0) || s > upper) continue;
    const auto idx = static_cast<std::size_t>(std::floor(s / upper * static_cast<double>(buckets)));
    hit[std::min(idx, buckets - 1)] = 1;
  }
  return static_cast<double>(std::count(hit.begin(), hit.end(), 1)) / static_cast<double>(buckets);
}

double neuron_similarity(std::span<const ActivationTrace> tuple, const CoverageConfig& config,
                         const ReferenceBank* ranges) {
  require(tuple.size() >= 2, Errc::InvalidArgument, "similarity needs an original and a follow-up");
  const std::size_t n = tuple.front().size();
  require(n > 0, Errc::EmptyTraceSet, "traces hold no neurons");
  for (const ActivationTrace& t : tuple) {
    require(t.size() == n, Errc::LengthMismatch, "traces in a tuple differ in length");
  }

  // Map every trace onto comparable per-neuron coordinates first.
  std::vector<std::vector<double>> coords(tuple.size(), std::vector<double>(n));
  if (config.criterion == CoverageCriterion::NC) {
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) coords[i][j] = tuple[i].values[j] > config.nc_threshold ? 1.0 : 0.0;
    }
  } else {
    std::vector<double> lo(n), hi(n);
    if (ranges && ranges->neuron_min.size() == n) {
      lo = ranges->neuron_min;
      hi = ranges->neuron_max;
    } else {
      lo = tuple.front().values;
      hi = tuple.front().values;
      for (const ActivationTrace& t : tuple) {
        for (std::size_t j = 0; j < n; ++j) {
          lo[j] = std::min(lo[j], t.values[j]);
          hi[j] = std::max(hi[j], t.values[j]);
        }
      }
    }
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double range = hi[j] - lo[j];
        coords[i][j] = range > 0.0 ? std::clamp((tuple[i].values[j] - lo[j]) / range, 0.0, 1.0) : 0.0;
      }
    }
  }

  double total = 0.0;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    for (std::size_t b = a + 1; b < coords.size(); ++b) {
      for (std::size_t j = 0; j < n; ++j) total += std::abs(coords[a][j] - coords[b][j]);
    }
  }
  const double pairs = static_cast<double>(tuple.size() * (tuple.size() - 1) / 2);
  return total / (static_cast<double>(n) * pairs);
}

double kill_ratio(const Mlp& model, const Dataset& subset, const Individual& individual,
                  const BoundsTable& bounds) {
  require(!subset.empty(), Errc::EmptySubset, "kill ratio over an empty subset");
  require(!individual.chains.empty(), Errc::InvalidArgument, "individual holds no chains");
  std::size_t killed = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const std::size_t original = predict(model, subset.images[i]);
    for (const HmrChain& chain : individual.chains) {
      if (chain.is_identity()) continue;
      if (predict(model, apply_chain(chain, subset.images[i], bounds)) != original) {
        ++killed;
        break;
      }
    }
  }
  return static_cast<double>(killed) / static_cast<double>(subset.size());
}

Evaluator::Evaluator(const Mlp& model, const Dataset& subset, CoverageConfig config,
                     const BoundsTable& bounds, const ReferenceBank* bank)
    : model_(&model), subset_(&subset), config_(config), bounds_(&bounds), bank_(bank) {
  config_.validate();
  require(!subset.empty(), Errc::EmptySubset, "evaluation subset is empty");
  require(config_.criterion == CoverageCriterion::NC || bank_ != nullptr, Errc::MissingClassBank,
          "DSA coverage needs a reference bank");
  original_traces_.reserve(subset.size());
  for (const Image& img : subset.images) {
    ForwardResult r = forward(model, img);
    original_predictions_.push_back(argmax(r.probabilities));
    if (config_.criterion == CoverageCriterion::DSA) {
      original_scores_.push_back(dsa_score(r.trace, original_predictions_.back(), *bank_));
    }
    original_traces_.push_back(std::move(r.trace));
  }
}

double Evaluator::baseline_coverage() const {
  if (config_.criterion == CoverageCriterion::NC) {
    return neuron_coverage(original_traces_, config_.nc_threshold);
  }
  return dsa_coverage(original_scores_, config_.dsa_buckets, config_.dsa_upper);
}

ObjectiveVector Evaluator::evaluate(const Individual& individual) const {
  require(!individual.chains.empty(), Errc::InvalidArgument, "individual holds no chains");
  const bool nc = config_.criterion == CoverageCriterion::NC;
  const std::size_t neurons = model_->hidden_neurons();
  std::vector<char> activated;
  std::vector<double> scores;
  if (nc) {
    activated.assign(neurons, 0);
  } else {
    scores = original_scores_;
  }

  std::size_t killed = 0;
  double similarity_sum = 0.0;
  std::vector<ActivationTrace> tuple(individual.chains.size() + 1);
  for (std::size_t i = 0; i < subset_->size(); ++i) {
    tuple[0] = original_traces_[i];
    bool kill = false;
    for (std::size_t k = 0; k < individual.chains.size(); ++k) {
      const HmrChain& chain = individual.chains[k];
      if (chain.is_identity()) {
        tuple[k + 1] = original_traces_[i];
        continue;
      }
      ForwardResult r = forward(*model_, apply_chain(chain, subset_->images[i], *bounds_));
      const std::size_t pred = argmax(r.probabilities);
      kill = kill || pred != original_predictions_[i];
      if (!nc) scores.push_back(dsa_score(r.trace, pred, *bank_));
      tuple[k + 1] = std::move(r.trace);
    }
    killed += kill;
    if (nc) {
      for (const ActivationTrace& t : tuple) {
        for (std::size_t j = 0; j < neurons; ++j) activated[j] |= t.values[j] > config_.nc_threshold;
      }
    }
    similarity_sum += neuron_similarity(tuple, config_, bank_);
  }

  const double n = static_cast<double>(subset_->size());
  ObjectiveVector out;
  out.coverage = nc ? static_cast<double>(std::count(activated.begin(), activated.end(), 1)) /
                          static_cast<double>(neurons)
                    : dsa_coverage(scores, config_.dsa_buckets, config_.dsa_upper);
  out.similarity = similarity_sum / n;
  out.kill_ratio = static_cast<double>(killed) / n;
  out.feasible = false;
  return out;
}

ObjectiveVector evaluate(const Mlp& model, const Dataset& subset, const Individual& individual,
                         const CoverageConfig& config, const BoundsTable& bounds,
                         const ReferenceBank* bank) {
  return Evaluator(model, subset, config, bounds, bank).evaluate(individual);
}

}  // namespace hmrs
