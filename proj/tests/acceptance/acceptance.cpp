// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/fixtures.hpp"
#include "hmrs/config.hpp"
#include "hmrs/digits.hpp"
#include "hmrs/fgsm.hpp"
#include "hmrs/metrics.hpp"
#include "hmrs/report.hpp"
#include "hmrs/search.hpp"
#include "hmrs/selection.hpp"
#include "hmrs/stats.hpp"
#include "hmrs/train.hpp"
#include "hmrs/uncertainty.hpp"

namespace hmrs {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Shared desk-scale runs on the bundled toy data.

struct ToyRun {
  std::uint64_t seed = 0;
  SelectionResult result;
};

struct ToyWorld {
  RunConfig cfg = parse_config(default_config_text());
  Mlp model;
  Dataset calibration;
  Dataset test;
  std::vector<ToyRun> runs;
  double select_seconds = 0.0;
  double train_seconds = 0.0;
};

RunConfig with_seed(RunConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.selection.search.seed = seed;
  return cfg;
}

ValidityReference reference_for(const ToyWorld& w, const RunConfig& cfg) {
  const auto& unc = cfg.selection.uncertainty;
  const Dataset noise = reference_noise(w.calibration, unc, cfg.seed);
  return build_validity_reference(w.model, w.calibration, noise, unc.final_samples, RunSeeds(cfg.seed).mc,
                                  unc.grid_step);
}

ToyWorld& toy_world() {
  static ToyWorld w = [] {
    ToyWorld world;
    const auto t0 = Clock::now();
    world.model = train_toy(world.cfg.architecture, load_split(world.cfg, Split::Train), world.cfg.training);
    world.train_seconds = seconds_since(t0);
    world.calibration = load_split(world.cfg, Split::Calibration);
    world.test = load_split(world.cfg, Split::Test);
    const auto t1 = Clock::now();
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const RunConfig cfg = with_seed(world.cfg, s);
      world.runs.push_back({s, select_relations(world.model, world.calibration, cfg.selection)});
    }
    world.select_seconds = seconds_since(t1);
    return world;
  }();
  return w;
}

std::vector<ObjectiveVector> objectives_of(const std::vector<Individual>& members) {
  std::vector<ObjectiveVector> out;
  for (const auto& m : members) out.push_back(*m.objectives);
  return out;
}

// ---------------------------------------------------------------------------
// 1. Nondominated sorting against brute-force pairwise dominance.

bool oracle_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.feasible != b.feasible) return a.feasible;
  const bool no_worse = a.coverage >= b.coverage && a.similarity <= b.similarity && a.kill_ratio >= b.kill_ratio;
  const bool better = a.coverage > b.coverage || a.similarity < b.similarity || a.kill_ratio > b.kill_ratio;
  return no_worse && better;
}

std::vector<std::vector<std::size_t>> oracle_fronts(const std::vector<ObjectiveVector>& pop) {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<char> placed(pop.size(), 0);
  std::size_t remaining = pop.size();
  while (remaining > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (placed[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < pop.size() && !dominated; ++j) {
        dominated = j != i && !placed[j] && oracle_dominates(pop[j], pop[i]);
      }
      if (!dominated) front.push_back(i);
    }
    for (std::size_t i : front) placed[i] = 1;
    remaining -= front.size();
    fronts.push_back(front);
  }
  return fronts;
}

Outcome criterion_sort_oracle() {
  Rng rng(101);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ObjectiveVector> pop(1 + rng.below(50));
    for (auto& v : pop) {
      v = {rng.below(6) / 5.0, rng.below(6) / 5.0, rng.below(6) / 5.0, rng.bernoulli(0.7)};
    }
    auto fronts = nondominated_sort(pop);
    for (auto& f : fronts) std::sort(f.begin(), f.end());
    mismatches += fronts != oracle_fronts(pop);
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 200 populations"};
}

// ---------------------------------------------------------------------------
// 2. Metric oracles on fixture models.

ActivationTrace trace(std::vector<double> v) {
  ActivationTrace t;
  t.layer_offsets = {0, v.size()};
  t.values = std::move(v);
  return t;
}

double oracle_nsim(const std::vector<ActivationTrace>& tuple, double threshold) {
  const std::size_t n = tuple.front().size();
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < tuple.size(); ++a) {
    for (std::size_t b = a + 1; b < tuple.size(); ++b) {
      std::size_t hamming = 0;
      for (std::size_t j = 0; j < n; ++j) {
        hamming += (tuple[a].values[j] > threshold) != (tuple[b].values[j] > threshold);
      }
      total += static_cast<double>(hamming);
      ++pairs;
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(pairs));
}

double squared_distance(const ActivationTrace& a, const ActivationTrace& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a.values[j] - b.values[j]) * (a.values[j] - b.values[j]);
  return s;
}

double oracle_dsa(const ActivationTrace& t, std::size_t predicted, const ReferenceBank& bank) {
  const ActivationTrace* xa = nullptr;
  double best = INFINITY;
  for (const auto& r : bank.by_class[predicted]) {
    const double d = squared_distance(t, r);
    if (d < best) best = d, xa = &r;
  }
  const ActivationTrace* xb = nullptr;
  best = INFINITY;
  for (std::size_t c = 0; c < bank.by_class.size(); ++c) {
    if (c == predicted) continue;
    for (const auto& r : bank.by_class[c]) {
      const double d = squared_distance(*xa, r);
      if (d < best) best = d, xb = &r;
    }
  }
  return std::sqrt(squared_distance(t, *xa)) / std::sqrt(squared_distance(t, *xb));
}

Outcome criterion_metric_oracles() {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  // Hand-computed cases.
  const std::vector<ActivationTrace> nc_case{trace({0.3, 0.1, 0.25}), trace({0.05, 0.2, 0.0})};
  check(neuron_coverage(nc_case, 0.25) == 1.0 / 3.0, "NC hand case");
  const std::vector<ActivationTrace> sim_case{trace({1, 0, 1}), trace({1, 1, 0})};
  check(std::abs(neuron_similarity(sim_case, CoverageConfig{}) - 2.0 / 3.0) <= 1e-9, "Nsim hand case");
  ReferenceBank line;
  line.add(0, trace({0.0}));
  line.add(1, trace({1.0}));
  check(std::abs(dsa_score(trace({0.2}), 0, line) - 0.25) <= 1e-9, "DSA hand case");
  {
    Dataset d;
    d.num_classes = 2;
    for (std::size_t i = 0; i < 10; ++i) {
      Image img(1, 5);
      if (i == 2 || i == 7) img.at(0, 1) = 1.0;
      if (i == 7 || i == 9) img.at(0, 3) = 1.0;
      d.images.push_back(img);
      d.labels.push_back(0);
    }
    // Class 1 wins iff the centre pixel exceeds 0.5; shifts kill inputs 2, 7, 9.
    const Mlp centre({testing::dense(5, 2, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0}, {0.5, 0.0}, Activation::Softmax)});
    const Individual shifts{{HmrChain{{TransformSpec{TransformKind::Translation, {1, 0}, true}}},
                             HmrChain{{TransformSpec{TransformKind::Translation, {-1, 0}, true}}}},
                            std::nullopt};
    check(kill_ratio(centre, d, shifts) == 0.3, "KR hand case");
  }

  // Brute force on random fixture models.
  const CoverageConfig nc{};
  std::size_t compared = 0;
  for (std::uint64_t m = 0; m < 5; ++m) {
    const Mlp model = testing::random_mlp({64, 16, 12, 10}, 200 + m);
    const Dataset data = synthetic_digits(30, 300 + m);
    Rng rng(400 + m);
    for (int k = 0; k < 4; ++k) {
      const Individual ind = random_individual(SearchConfig{}, BoundsTable::defaults(), rng);
      const ObjectiveVector got = evaluate(model, data, ind, nc);
      std::vector<char> on(model.hidden_neurons(), 0);
      std::size_t killed = 0;
      double sim = 0.0;
      for (const Image& img : data.images) {
        std::vector<ActivationTrace> tuple{forward(model, img).trace};
        const std::size_t p = predict(model, img);
        bool kill = false;
        for (const HmrChain& c : ind.chains) {
          const Image follow = apply_chain(c, img);
          tuple.push_back(forward(model, follow).trace);
          kill = kill || predict(model, follow) != p;
        }
        for (const auto& t : tuple) {
          for (std::size_t j = 0; j < on.size(); ++j) on[j] |= t.values[j] > nc.nc_threshold;
        }
        killed += kill;
        sim += oracle_nsim(tuple, nc.nc_threshold);
      }
      const double n = static_cast<double>(data.size());
      const double coverage = static_cast<double>(std::count(on.begin(), on.end(), 1)) /
                              static_cast<double>(on.size());
      check(got.coverage == coverage, "NC brute force model " + std::to_string(m));
      check(got.kill_ratio == static_cast<double>(killed) / n, "KR brute force model " + std::to_string(m));
      check(std::abs(got.similarity - sim / n) <= 1e-9, "Nsim brute force model " + std::to_string(m));
      ++compared;
    }

    const ReferenceBank bank = build_reference_bank(model, synthetic_digits(200, 500 + m), 2000, 7);
    const Dataset queries = synthetic_digits(20, 600 + m);
    for (const Image& img : queries.images) {
      const ForwardResult r = forward(model, img);
      const std::size_t p = argmax(r.probabilities);
      bool have_other = false;
      for (std::size_t c = 0; c < bank.by_class.size(); ++c) have_other |= c != p && !bank.by_class[c].empty();
      if (p >= bank.by_class.size() || bank.by_class[p].empty() || !have_other) continue;
      check(std::abs(dsa_score(r.trace, p, bank) - oracle_dsa(r.trace, p, bank)) <= 1e-9,
            "DSA brute force model " + std::to_string(m));
      ++compared;
    }
  }
  std::string detail = std::to_string(compared) + " brute-force comparisons plus hand cases";
  if (!failures.empty()) detail += "; first failure: " + failures.front();
  return {failures.empty(), detail};
}

// ---------------------------------------------------------------------------
// 3. FGSM input gradient against central finite differences.

Outcome criterion_gradient_check() {
  double worst = 0.0;
  for (std::uint64_t m = 0; m < 20; ++m) {
    Rng rng(700 + m);
    const std::size_t hidden = 4 + rng.below(12);
    const Mlp model = testing::random_mlp({16, hidden, 5}, 800 + m);
    const Image img = testing::random_image(4, 4, 900 + m);
    const std::size_t label = rng.below(5);
    const std::vector<double> grad = input_gradient(model, img, label);
    const double h = 1e-6;
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      std::vector<double> up = img.data, down = img.data;
      up[i] += h;
      down[i] -= h;
      const double fd = (cross_entropy(model, up, label) - cross_entropy(model, down, label)) / (2 * h);
      diff += (grad[i] - fd) * (grad[i] - fd);
      norm += fd * fd;
    }
    worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-12));
  }
  std::ostringstream d;
  d << "worst relative error " << worst << " over 20 models (limit 1e-4)";
  return {worst < 1e-4, d.str()};
}

// ---------------------------------------------------------------------------
// 4. Validity bound identities.

Outcome criterion_bound_identities() {
  Rng rng(1000);
  std::size_t failures = 0, pairs = 0;
  auto random_profile = [&] {
    std::vector<double> c(1 + rng.below(200));
    for (double& v : c) v = rng.uniform();
    if (rng.bernoulli(0.3)) c.push_back(1.0);
    return profile_from_certainties(c, 0.01);
  };
  std::vector<std::pair<CertaintyProfile, CertaintyProfile>> cases;
  for (int i = 0; i < 200; ++i) cases.emplace_back(random_profile(), random_profile());
  const Mlp model = testing::random_mlp({64, 16, 10}, 1001, 0.3);
  const Dataset digits = synthetic_digits(50, 1002);
  cases.emplace_back(profile(model, digits, 20, 3), profile(model, noise_dataset(8, 8, 1, 50, 4, 10), 20, 3));
  for (const auto& [u, l] : cases) {
    const ValidityBound c = lower_bound(u, l);
    bool ok = c.bound.front() == 1.0 && c.thresholds.back() == 1.0 && c.bound.back() == l.fractions.back();
    const ValidityBound same = lower_bound(u, u);
    for (std::size_t i = 0; i < u.fractions.size(); ++i) ok = ok && std::abs(same.bound[i] - u.fractions[i]) <= 1e-12;
    failures += !ok;
    ++pairs;
  }
  return {failures == 0, std::to_string(failures) + " violations over " + std::to_string(pairs) + " profile pairs"};
}

// ---------------------------------------------------------------------------
// 5. Direction of optimised versus random sets on the toy setup.

constexpr std::uint64_t kRandomSetsTag = 0x7a4d;

Outcome criterion_direction() {
  ToyWorld& w = toy_world();
  const auto t_random = Clock::now();
  Rng rng(derive_seed(w.cfg.seed, {kRandomSetsTag}));
  const auto sets = random_sets(w.cfg.random_sets, w.cfg.selection.search, w.cfg.selection.bounds, rng);
  const ValidityReference ref = reference_for(w, w.cfg);
  const auto random_rows = evaluate_sets(w.model, w.calibration, sets, w.cfg.selection, ref.bound,
                                         w.cfg.selection.uncertainty.final_samples, RunSeeds(w.cfg.seed).mc);
  std::vector<ObjectiveVector> knees;
  for (const auto& r : w.runs) {
    if (r.result.knee) knees.push_back(*r.result.final_front.members[*r.result.knee].objectives);
  }
  const double random_seconds = seconds_since(t_random);
  const double total = w.train_seconds + w.select_seconds + random_seconds;

  std::ostringstream d;
  if (knees.empty()) return {false, "no run produced a knee"};
  const ComparisonReport report = compare(knees, random_rows);
  const auto& sim = report.criteria[1];
  const auto& kr = report.criteria[2];
  const bool kr_ok = kr.test.p < 0.05 && kr.optimized_mean > kr.random_mean;
  const bool sim_ok = sim.test.p < 0.05 && sim.optimized_mean < sim.random_mean;
  d << "kill ratio " << kr.optimized_mean << " vs " << kr.random_mean << " p=" << kr.test.p << "; similarity "
    << sim.optimized_mean << " vs " << sim.random_mean << " p=" << sim.test.p << "; " << knees.size()
    << " knees vs " << report.random_used << " random (" << report.random_discarded << " infeasible dropped); "
    << "runtime " << static_cast<int>(total) << "s (limit 900s)";
  return {kr_ok && sim_ok && total < 900.0, d.str()};
}

// ---------------------------------------------------------------------------
// 6. Front objectives on calibration versus the held-out split.

Outcome criterion_generalization() {
  ToyWorld& w = toy_world();
  std::size_t passing = 0, runs = 0;
  double worst = 0.0;
  for (const auto& r : w.runs) {
    ++runs;
    if (r.result.final_front.feasible_empty) continue;
    const RunConfig cfg = with_seed(w.cfg, r.seed);
    const auto& members = r.result.final_front.members;
    const auto on_cal = objectives_of(members);
    const auto on_test = evaluate_sets(w.model, w.test, members, cfg.selection, r.result.final_reference.bound,
                                       cfg.selection.uncertainty.final_samples, RunSeeds(cfg.seed).mc);
    bool ok = true;
    for (Criterion c : kCriteria) {
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        a += criterion_value(on_cal[i], c);
        b += criterion_value(on_test[i], c);
      }
      const double delta = std::abs(a - b) / static_cast<double>(members.size());
      worst = std::max(worst, delta);
      ok = ok && delta < 0.05;
    }
    passing += ok;
  }
  std::ostringstream d;
  d << passing << "/" << runs << " seeds within 5pp per criterion (front mean); worst gap " << worst;
  return {passing >= 9, d.str()};
}

// ---------------------------------------------------------------------------
// 7. Validity gate on returned fronts and on loosened random sets.

Outcome criterion_validity_gate() {
  ToyWorld& w = toy_world();
  const auto& unc = w.cfg.selection.uncertainty;
  std::vector<std::size_t> ids(w.calibration.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;

  std::size_t chains = 0, invalid = 0;
  for (const auto& r : w.runs) {
    const RunConfig cfg = with_seed(w.cfg, r.seed);
    const ValidityGate gate(w.model, w.calibration.images, ids, r.result.final_reference.bound, unc.final_samples,
                            RunSeeds(cfg.seed).mc, unc.tolerance, cfg.selection.bounds);
    for (const auto& m : r.result.final_front.members) {
      for (const auto& c : m.chains) {
        if (c.is_identity()) continue;
        ++chains;
        invalid += !gate.chain_valid(c);
      }
    }
  }

  BoundsTable loose = w.cfg.selection.bounds;
  loose.set(TransformKind::Rotation, 0, {-45.0, 45.0});
  loose.set(TransformKind::Contrast, 0, {1.0, 4.0});
  std::size_t seeds_with_failure = 0;
  std::ostringstream per_seed;
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const RunConfig cfg = with_seed(w.cfg, s);
    Rng rng(derive_seed(s, {kRandomSetsTag}));
    const auto sets = random_sets(30, cfg.selection.search, loose, rng);
    const ValidityReference ref = reference_for(w, cfg);
    const ValidityGate gate(w.model, w.calibration.images, ids, ref.bound, unc.final_samples, RunSeeds(s).mc,
                            unc.tolerance, loose);
    std::size_t failing = 0;
    for (const auto& set : sets) failing += !gate.feasible(set);
    per_seed << (s > 1 ? "," : "") << failing;
    seeds_with_failure += failing > 0;
  }
  std::ostringstream d;
  d << invalid << " of " << chains << " front chains invalid; random sets failing per seed: " << per_seed.str()
    << " of 30";
  return {invalid == 0 && seeds_with_failure == 5, d.str()};
}

// ---------------------------------------------------------------------------
// 8. Planted optimum: contrast deterministically flips a brightness classifier.

// Hidden neuron 0 reads mean brightness; class 1 wins when it exceeds 0.3.
// The logit gap is large enough that softmax saturates, so certainty is 1
// unless the mean lands within a few thousandths of the threshold.
Mlp rigged_model() {
  constexpr std::size_t kPixels = kDigitSide * kDigitSide;
  std::vector<double> w1(2 * kPixels);
  for (std::size_t i = 0; i < kPixels; ++i) {
    w1[i] = 1.0 / kPixels;
    w1[kPixels + i] = -2.0 / kPixels;
  }
  const double k = 5000.0;
  return Mlp({testing::dense(kPixels, 2, w1, {0.0, 1.0}, Activation::Relu),
              testing::dense(2, 2, {-k, 0.0, k, 0.0}, {0.3 * k, -0.3 * k}, Activation::Softmax)});
}

// Dark images with mean near 0.2. Only contrast can raise the mean; every
// other transform kind keeps or lowers it.
Dataset dark_images(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.num_classes = 2;
  for (std::size_t i = 0; i < n; ++i) {
    Image img(kDigitSide, kDigitSide);
    const double level = rng.uniform(0.18, 0.22);
    for (double& v : img.data) v = level + rng.uniform(-0.05, 0.05);
    d.images.push_back(img);
    d.labels.push_back(0);
  }
  return d;
}

Outcome criterion_planted_optimum() {
  const Mlp model = rigged_model();
  const Dataset calibration = dark_images(200, 11);
  std::size_t found = 0;
  std::ostringstream best;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    SelectionSettings settings;
    settings.search.seed = s;
    const SelectionResult r = select_relations(model, calibration, settings);
    double kr = 0.0;
    for (const auto& m : r.final_front.members) kr = std::max(kr, m.objectives->kill_ratio);
    best << (s > 1 ? "," : "") << kr;
    found += kr >= 0.95;
  }
  return {found >= 9, std::to_string(found) + "/10 runs reach KR >= 0.95 (best per run: " + best.str() + ")"};
}

// ---------------------------------------------------------------------------
// 9. Two end-to-end CLI select runs produce byte-identical reports.

#ifdef HMRS_CLI_PATH
int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HMRS_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_determinism() {
  const fs::path dir = testing::scratch_dir("acceptance-determinism");
  write_text_file(dir / "hmrs.json", default_config_text());
  const std::string cfg = "--config " + (dir / "hmrs.json").string();
  if (run_cli(cfg + " train", dir / "train.log") != 0) return {false, "train failed"};
  const int a = run_cli(cfg + " --out " + (dir / "a").string() + " select", dir / "a.log");
  const int b = run_cli(cfg + " --out " + (dir / "b").string() + " select", dir / "b.log");
  if (a != b) return {false, "exit codes differ"};
  std::size_t files = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const fs::path other = dir / "b" / entry.path().filename();
    ++files;
    differing += !fs::exists(other) || read_text_file(entry.path()) != read_text_file(other);
  }
  const std::size_t count_b = static_cast<std::size_t>(std::distance(fs::directory_iterator(dir / "b"), {}));
  return {files > 0 && differing == 0 && count_b == files,
          std::to_string(files) + " report files compared, " + std::to_string(differing) + " differ"};
}
#else
Outcome criterion_determinism() { return {false, "the hmrs tool was not built"}; }
#endif

// ---------------------------------------------------------------------------
// 10. Statistics oracles.

double u_by_pairs(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : x == y ? 0.5 : 0.0;
  }
  return u;
}

double enumerated_p(const std::vector<double>& a, const std::vector<double>& b, Alternative alt) {
  std::vector<double> pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  const std::size_t n = pool.size();
  const double observed = u_by_pairs(a, b);
  double total = 0, ge = 0, le = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? x : y).push_back(pool[i]);
    const double u = u_by_pairs(x, y);
    ++total;
    ge += u >= observed - 1e-9;
    le += u <= observed + 1e-9;
  }
  switch (alt) {
    case Alternative::Greater: return ge / total;
    case Alternative::Less: return le / total;
    case Alternative::TwoSided: return std::min(1.0, 2.0 * std::min(ge, le) / total);
  }
  return 1.0;
}

Outcome criterion_statistics() {
  Rng rng(1100);
  std::size_t mw_fail = 0, mw_cases = 0;
  for (std::size_t n1 = 1; n1 <= kExactMannWhitneyLimit; ++n1) {
    for (std::size_t n2 = 1; n2 <= kExactMannWhitneyLimit; ++n2) {
      std::vector<double> a(n1), b(n2);
      for (double& v : a) v = rng.below(5) * 0.25;
      for (double& v : b) v = rng.below(5) * 0.25;
      for (Alternative alt : {Alternative::Greater, Alternative::Less, Alternative::TwoSided}) {
        const auto r = mann_whitney_u(a, b, alt);
        mw_fail += !r.exact || r.u != u_by_pairs(a, b) || std::abs(r.p - enumerated_p(a, b, alt)) > 1e-12;
        ++mw_cases;
      }
    }
  }
  std::size_t cd_fail = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(1 + rng.below(12)), b(1 + rng.below(12));
    for (double& v : a) v = rng.below(7);
    for (double& v : b) v = rng.below(7);
    cd_fail += cliffs_delta(a, b).delta != -cliffs_delta(b, a).delta;
  }
  return {mw_fail == 0 && cd_fail == 0, std::to_string(mw_fail) + "/" + std::to_string(mw_cases) +
                                            " exact Mann-Whitney mismatches; " + std::to_string(cd_fail) +
                                            "/1000 Cliff's delta antisymmetry violations"};
}

}  // namespace
}  // namespace hmrs

int main() {
  using hmrs::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"nondominated sort matches brute-force dominance", hmrs::criterion_sort_oracle},
      {"metric oracles (NC, Nsim, KR, DSA)", hmrs::criterion_metric_oracles},
      {"FGSM gradient matches finite differences", hmrs::criterion_gradient_check},
      {"validity bound identities", hmrs::criterion_bound_identities},
      {"optimised sets beat random sets on kill ratio and similarity", hmrs::criterion_direction},
      {"front objectives generalise to the held-out split", hmrs::criterion_generalization},
      {"validity gate on fronts and loosened random sets", hmrs::criterion_validity_gate},
      {"planted optimum is found", hmrs::criterion_planted_optimum},
      {"select reports are byte-identical across runs", hmrs::criterion_determinism},
      {"statistics oracles", hmrs::criterion_statistics},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
