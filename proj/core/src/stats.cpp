// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "hmrs/error.hpp"

namespace hmrs {

namespace {

struct Pooled {
  // Twice the midrank of each value, so tied ranks stay integral.
  std::vector<long> doubled_ranks;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
};

Pooled pool(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<std::pair<double, std::size_t>> values;
  values.reserve(n);
  for (std::size_t i = 0; i < a.size(); ++i) values.emplace_back(a[i], i);
  for (std::size_t i = 0; i < b.size(); ++i) values.emplace_back(b[i], a.size() + i);
  std::sort(values.begin(), values.end());
  Pooled p;
  p.doubled_ranks.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[j].first == values[i].first) ++j;
    const long doubled = static_cast<long>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) p.doubled_ranks[values[k].second] = doubled;
    const double t = static_cast<double>(j - i);
    p.tie_term += t * t * t - t;
    i = j;
  }
  return p;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Exact null distribution of the doubled rank sum of a size-n1 subset,
// built by dynamic programming over the pooled ranks.
MannWhitneyResult exact_test(const Pooled& pooled, std::size_t n1, std::size_t n2, double u,
                             Alternative alternative) {
  const std::size_t n = n1 + n2;
  // counts[k][s]: number of k-subsets of the items seen so far with doubled sum s.
  std::vector<std::map<long, double>> counts(n1 + 1);
  counts[0][0] = 1.0;
  for (std::size_t item = 0; item < n; ++item) {
    const long r = pooled.doubled_ranks[item];
    for (std::size_t k = std::min(item + 1, n1); k >= 1; --k) {
      for (const auto& [sum, ways] : counts[k - 1]) counts[k][sum + r] += ways;
    }
  }
  // U = R1 - n1(n1+1)/2, so doubled: 2U = 2R1 - n1(n1+1).
  const long offset = static_cast<long>(n1 * (n1 + 1));
  const long observed = std::lround(2.0 * u);
  double total = 0.0, ge = 0.0, le = 0.0;
  for (const auto& [sum, ways] : counts[n1]) {
    const long twice_u = sum - offset;
    total += ways;
    if (twice_u >= observed) ge += ways;
    if (twice_u <= observed) le += ways;
  }
  MannWhitneyResult r;
  r.u = u;
  r.exact = true;
  switch (alternative) {
    case Alternative::Greater: r.p = ge / total; break;
    case Alternative::Less: r.p = le / total; break;
    case Alternative::TwoSided: r.p = std::min(1.0, 2.0 * std::min(ge, le) / total); break;
  }
  return r;
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                                 Alternative alternative) {
  require(!a.empty() && !b.empty(), Errc::EmptySample, "Mann-Whitney needs two non-empty samples");
  const Pooled pooled = pool(a, b);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  long doubled_r1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) doubled_r1 += pooled.doubled_ranks[i];
  const double u = static_cast<double>(doubled_r1) / 2.0 - n1 * (n1 + 1.0) / 2.0;

  if (a.size() <= kExactMannWhitneyLimit && b.size() <= kExactMannWhitneyLimit) {
    return exact_test(pooled, a.size(), b.size(), u, alternative);
  }

  const double n = n1 + n2;
  const double mu = n1 * n2 / 2.0;
  const double variance = n1 * n2 / 12.0 * ((n + 1.0) - pooled.tie_term / (n * (n - 1.0)));
  MannWhitneyResult r;
  r.u = u;
  if (variance <= 0.0) {
    r.p = 1.0;
    return r;
  }
  const double sd = std::sqrt(variance);
  switch (alternative) {
    case Alternative::Greater: r.p = normal_sf((u - mu - 0.5) / sd); break;
    case Alternative::Less: r.p = normal_sf((mu - u - 0.5) / sd); break;
    case Alternative::TwoSided:
      r.p = std::min(1.0, 2.0 * normal_sf(std::max(0.0, std::abs(u - mu) - 0.5) / sd));
      break;
  }
  return r;
}

std::string_view magnitude_name(EffectMagnitude m) noexcept {
  switch (m) {
    case EffectMagnitude::Negligible: return "negligible";
    case EffectMagnitude::Small: return "small";
    case EffectMagnitude::Medium: return "medium";
    case EffectMagnitude::Large: return "large";
  }
  return "unknown";
}

CliffsDelta cliffs_delta(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), Errc::EmptySample, "Cliff's delta needs two non-empty samples");
  long balance = 0;
  for (double x : a) {
    for (double y : b) balance += (x > y) - (x < y);
  }
  CliffsDelta d;
  d.delta = static_cast<double>(balance) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  const double m = std::abs(d.delta);
  d.magnitude = m < 0.147 ? EffectMagnitude::Negligible
              : m < 0.33  ? EffectMagnitude::Small
              : m < 0.474 ? EffectMagnitude::Medium
                          : EffectMagnitude::Large;
  return d;
}

std::string_view criterion_name(Criterion c) noexcept {
  switch (c) {
    case Criterion::Coverage: return "coverage";
    case Criterion::Similarity: return "similarity";
    case Criterion::KillRatio: return "kill_ratio";
  }
  return "unknown";
}

double criterion_value(const ObjectiveVector& v, Criterion c) noexcept {
  switch (c) {
    case Criterion::Coverage: return v.coverage;
    case Criterion::Similarity: return v.similarity;
    case Criterion::KillRatio: return v.kill_ratio;
  }
  return 0.0;
}

Alternative better_direction(Criterion c) noexcept {
  return c == Criterion::Similarity ? Alternative::Less : Alternative::Greater;
}

ComparisonReport compare(std::span<const ObjectiveVector> optimized,
                         std::span<const ObjectiveVector> random) {
  ComparisonReport report;
  std::vector<ObjectiveVector> opt, rnd;
  for (const auto& v : optimized) (v.feasible ? opt.push_back(v) : void(++report.optimized_discarded));
  for (const auto& v : random) (v.feasible ? rnd.push_back(v) : void(++report.random_discarded));
  require(!opt.empty(), Errc::EmptySample, "no feasible optimised results to compare");
  require(!rnd.empty(), Errc::EmptySample, "no feasible random results to compare");
  report.optimized_used = opt.size();
  report.random_used = rnd.size();

  for (std::size_t k = 0; k < kCriteria.size(); ++k) {
    const Criterion c = kCriteria[k];
    std::vector<double> a, b;
    for (const auto& v : opt) a.push_back(criterion_value(v, c));
    for (const auto& v : rnd) b.push_back(criterion_value(v, c));
    CriterionComparison& out = report.criteria[k];
    out.criterion = c;
    out.optimized_mean = mean(a);
    out.optimized_sd = sample_sd(a);
    out.random_mean = mean(b);
    out.random_sd = sample_sd(b);
    out.test = mann_whitney_u(a, b, better_direction(c));
    out.effect = cliffs_delta(a, b);
  }
  return report;
}

}  // namespace hmrs
