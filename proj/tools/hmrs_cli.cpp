// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

// hmrs: select high-order metamorphic relation sets for an image classifier.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmrs/config.hpp"
#include "hmrs/digits.hpp"
#include "hmrs/error.hpp"
#include "hmrs/fgsm.hpp"
#include "hmrs/idx.hpp"
#include "hmrs/model_io.hpp"
#include "hmrs/report.hpp"
#include "hmrs/rng.hpp"
#include "hmrs/selection.hpp"
#include "hmrs/stats.hpp"
#include "hmrs/train.hpp"
#include "hmrs/uncertainty.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kBaselineTag = 0xba5e;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> threads;
};

hmrs::RunConfig resolve_config(const Globals& g) {
  hmrs::RunConfig cfg;
  try {
    cfg = g.config_path.empty() ? hmrs::parse_config(hmrs::default_config_text())
                                : hmrs::load_config(g.config_path);
  } catch (const hmrs::Error& e) {
    throw UsageError(e.what());
  }
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.selection.search.seed = *g.seed;
  }
  if (g.threads) cfg.selection.search.threads = std::max<std::size_t>(1, *g.threads);
  if (!g.out.empty()) {
    cfg.output_dir = g.out;
  } else if (const char* env = std::getenv("HMRS_OUT_DIR"); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  }
  return cfg;
}

void note(const std::string& msg) { std::cerr << "hmrs: " << msg << '\n'; }

void wrote(const fs::path& path, std::string_view content) {
  hmrs::write_text_file(path, content);
  note("wrote " + path.string());
}

hmrs::ValidityReference final_reference(const hmrs::Mlp& model, const hmrs::Dataset& calibration,
                                        const hmrs::RunConfig& cfg) {
  const auto& unc = cfg.selection.uncertainty;
  const hmrs::Dataset noise = hmrs::reference_noise(calibration, unc, cfg.seed);
  return hmrs::build_validity_reference(model, calibration, noise, unc.final_samples,
                                        hmrs::RunSeeds(cfg.seed).mc, unc.grid_step,
                                        cfg.selection.search.threads);
}

std::optional<hmrs::ReferenceBank> dsa_bank(const hmrs::Mlp& model, const hmrs::Dataset& calibration,
                                            const hmrs::RunConfig& cfg) {
  if (cfg.selection.coverage.criterion != hmrs::CoverageCriterion::DSA) return std::nullopt;
  return hmrs::build_reference_bank(model, calibration, cfg.selection.coverage.dsa_bank_cap,
                                    hmrs::RunSeeds(cfg.seed).bank);
}

std::vector<std::string> set_labels(std::size_t n, const std::string& prefix) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

std::size_t active_chains(const hmrs::Individual& ind) {
  std::size_t n = 0;
  for (const auto& chain : ind.chains) n += chain.is_identity() ? 0 : 1;
  return n;
}

int cmd_data(const hmrs::RunConfig& cfg) {
  for (hmrs::Split split : {hmrs::Split::Train, hmrs::Split::Calibration, hmrs::Split::Test}) {
    const std::string name(hmrs::split_name(split));
    const hmrs::Dataset data = hmrs::load_split(cfg, split);
    hmrs::save_idx(data, cfg.output_dir / (name + "-images.idx"), cfg.output_dir / (name + "-labels.idx"));
    note("wrote " + std::to_string(data.size()) + " " + name + " digits");
  }
  return 0;
}

int cmd_train(const hmrs::RunConfig& cfg) {
  const hmrs::Dataset train = hmrs::load_split(cfg, hmrs::Split::Train);
  hmrs::TrainOptions options = cfg.training;
  options.seed = cfg.seed;
  const hmrs::Mlp model = hmrs::train_toy(cfg.architecture, train, options);
  hmrs::save_model(model, cfg.model);
  note("wrote " + cfg.model.string());
  std::cout << "train accuracy " << hmrs::format_double(hmrs::accuracy(model, train)) << '\n';
  std::cout << "calibration accuracy "
            << hmrs::format_double(hmrs::accuracy(model, hmrs::load_split(cfg, hmrs::Split::Calibration)))
            << '\n';
  return 0;
}

int cmd_profile(const hmrs::RunConfig& cfg, const std::string& sets_path) {
  const hmrs::Mlp model = hmrs::load_model(cfg.model);
  const hmrs::Dataset cal = hmrs::load_split(cfg, hmrs::Split::Calibration);
  const auto& unc = cfg.selection.uncertainty;
  const std::size_t threads = cfg.selection.search.threads;
  const std::uint64_t mc = hmrs::RunSeeds(cfg.seed).mc;
  const hmrs::ValidityReference ref = final_reference(model, cal, cfg);

  std::vector<std::pair<std::string, std::vector<double>>> curves = {
      {"sound", ref.sound.fractions}, {"noise", ref.noise.fractions}, {"bound", ref.bound.bound}};
  const hmrs::Dataset adversarial = hmrs::fgsm_dataset(model, cal, cfg.fgsm_epsilon);
  curves.emplace_back("fgsm", hmrs::profile(model, adversarial, unc.final_samples, mc, unc.grid_step, threads).fractions);
  if (cfg.ood_images) {
    hmrs::Dataset ood;
    ood.images = hmrs::load_idx_images(*cfg.ood_images);
    ood.labels.assign(ood.images.size(), 0);
    ood.num_classes = cal.num_classes;
    curves.emplace_back("ood", hmrs::profile(model, ood, unc.final_samples, mc, unc.grid_step, threads).fractions);
  }

  std::ostringstream chains_csv;
  chains_csv << "set,chain,relation,valid\n";
  if (!sets_path.empty()) {
    const auto sets = hmrs::parse_individuals(hmrs::read_text_file(sets_path));
    std::vector<std::size_t> ids(cal.size());
    std::iota(ids.begin(), ids.end(), 0);
    const hmrs::ValidityGate gate(model, cal.images, ids, ref.bound, unc.final_samples, mc, unc.tolerance,
                                  cfg.selection.bounds);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      for (std::size_t c = 0; c < sets[s].chains.size(); ++c) {
        const hmrs::HmrChain& chain = sets[s].chains[c];
        if (chain.is_identity()) continue;
        const std::string name = "set" + std::to_string(s) + "_chain" + std::to_string(c);
        curves.emplace_back(name, gate.chain_profile(chain).fractions);
        chains_csv << s << ',' << c << ',' << hmrs::describe(chain) << ','
                   << (gate.chain_valid(chain) ? 1 : 0) << '\n';
      }
    }
  }
  wrote(cfg.output_dir / "profiles.csv", hmrs::curves_csv(curves, ref.sound.thresholds));
  if (!sets_path.empty()) wrote(cfg.output_dir / "chains.csv", chains_csv.str());
  return 0;
}

int cmd_select(const hmrs::RunConfig& cfg, const std::string& resume_path) {
  const hmrs::Mlp model = hmrs::load_model(cfg.model);
  const hmrs::Dataset cal = hmrs::load_split(cfg, hmrs::Split::Calibration);
  std::optional<hmrs::StepRecord> resume;
  if (!resume_path.empty()) {
    auto [record, seed] = hmrs::parse_checkpoint(hmrs::read_text_file(resume_path));
    if (seed != cfg.seed) throw UsageError("checkpoint was written with seed " + std::to_string(seed));
    resume = std::move(record);
  }
  const auto on_step = [&](const hmrs::StepRecord& r) {
    note("step " + std::to_string(r.step) + ": " + std::to_string(r.front.members.size()) +
         " front members after " + std::to_string(r.front.generations) + " generations");
    wrote(cfg.output_dir / ("step-" + std::to_string(r.step) + ".json"), hmrs::serialize_checkpoint(r, cfg.seed));
  };
  const hmrs::SelectionResult result = hmrs::select_relations(model, cal, cfg.selection, resume, on_step);

  const hmrs::ParetoFront& front = result.final_front;
  wrote(cfg.output_dir / "front.json", hmrs::serialize_front(front, result.knee));
  std::vector<hmrs::ObjectiveVector> rows;
  for (const auto& m : front.members) rows.push_back(*m.objectives);
  const auto labels = set_labels(rows.size(), "front");
  wrote(cfg.output_dir / "front.csv", hmrs::objectives_csv(rows, labels));
  if (result.knee) {
    const hmrs::Individual& knee = front.members[*result.knee];
    wrote(cfg.output_dir / "knee.json", hmrs::serialize_individuals(std::span(&knee, 1)));
    wrote(cfg.output_dir / "knee.csv", hmrs::objectives_csv(std::span(&*knee.objectives, 1),
                                                            std::vector<std::string>{"knee"}));
  }
  const auto& ref = result.final_reference;
  const std::vector<std::pair<std::string, std::vector<double>>> curves = {
      {"sound", ref.sound.fractions}, {"noise", ref.noise.fractions}, {"bound", ref.bound.bound}};
  wrote(cfg.output_dir / "validity.csv", hmrs::curves_csv(curves, ref.sound.thresholds));

  json summary = {{"seed", cfg.seed},
                  {"steps_run", result.steps.size()},
                  {"front_size", front.members.size()},
                  {"feasible_empty", front.feasible_empty},
                  {"dropped_infeasible", result.dropped_infeasible}};
  summary["knee"] = result.knee ? json(*result.knee) : json(nullptr);
  wrote(cfg.output_dir / "summary.json", summary.dump(2) + "\n");
  if (front.feasible_empty) {
    note("no relation set survived verification on the calibration set");
    return kExitData;
  }
  return 0;
}

int cmd_baseline(const hmrs::RunConfig& cfg) {
  const hmrs::Mlp model = hmrs::load_model(cfg.model);
  const hmrs::Dataset cal = hmrs::load_split(cfg, hmrs::Split::Calibration);
  hmrs::Rng rng(hmrs::derive_seed(cfg.seed, {kBaselineTag}));
  std::vector<hmrs::Individual> sets =
      hmrs::random_sets(cfg.random_sets, cfg.selection.search, cfg.selection.bounds, rng);
  const hmrs::ValidityReference ref = final_reference(model, cal, cfg);
  const auto bank = dsa_bank(model, cal, cfg);
  const auto rows = hmrs::evaluate_sets(model, cal, sets, cfg.selection, ref.bound,
                                        cfg.selection.uncertainty.final_samples,
                                        hmrs::RunSeeds(cfg.seed).mc, bank ? &*bank : nullptr);
  std::size_t discarded = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    sets[i].objectives = rows[i];
    discarded += rows[i].feasible ? 0 : 1;
  }
  wrote(cfg.output_dir / "baseline.json", hmrs::serialize_individuals(sets));
  wrote(cfg.output_dir / "baseline.csv", hmrs::objectives_csv(rows, set_labels(rows.size(), "random")));
  std::cout << discarded << " of " << sets.size() << " random sets fail the validity gate\n";
  return 0;
}

int cmd_evaluate(const hmrs::RunConfig& cfg, const std::string& sets_path, const std::string& split_name) {
  const hmrs::Mlp model = hmrs::load_model(cfg.model);
  const auto sets = hmrs::parse_individuals(hmrs::read_text_file(sets_path));
  if (sets.empty()) throw hmrs::Error(hmrs::Errc::EmptyDataset, sets_path + " holds no relation sets");
  const hmrs::Dataset cal = hmrs::load_split(cfg, hmrs::Split::Calibration);
  const hmrs::Split split = split_name == "calibration" ? hmrs::Split::Calibration : hmrs::Split::Test;
  const hmrs::Dataset target = split == hmrs::Split::Calibration ? cal : hmrs::load_split(cfg, split);

  const hmrs::ValidityReference ref = final_reference(model, cal, cfg);
  const auto bank = dsa_bank(model, cal, cfg);
  const std::uint64_t mc = hmrs::RunSeeds(cfg.seed).mc;
  const std::size_t n = cfg.selection.uncertainty.final_samples;
  const auto on_cal = hmrs::evaluate_sets(model, cal, sets, cfg.selection, ref.bound, n, mc, bank ? &*bank : nullptr);
  const auto on_target =
      hmrs::evaluate_sets(model, target, sets, cfg.selection, ref.bound, n, mc, bank ? &*bank : nullptr);

  std::ostringstream eval;
  eval << "label,coverage,similarity,kill_ratio,feasible,generated_images\n";
  std::ostringstream gen;
  gen << "label,coverage_calibration,coverage_" << split_name << ",coverage_delta,similarity_calibration,"
      << "similarity_" << split_name << ",similarity_delta,kill_ratio_calibration,kill_ratio_" << split_name
      << ",kill_ratio_delta\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& a = on_cal[i];
    const auto& b = on_target[i];
    const std::string label = "set" + std::to_string(i);
    eval << label << ',' << hmrs::format_double(b.coverage) << ',' << hmrs::format_double(b.similarity) << ','
         << hmrs::format_double(b.kill_ratio) << ',' << (b.feasible ? 1 : 0) << ','
         << target.size() * active_chains(sets[i]) << '\n';
    gen << label;
    for (const auto& [x, y] : {std::pair{a.coverage, b.coverage}, std::pair{a.similarity, b.similarity},
                               std::pair{a.kill_ratio, b.kill_ratio}}) {
      gen << ',' << hmrs::format_double(x) << ',' << hmrs::format_double(y) << ',' << hmrs::format_double(y - x);
    }
    gen << '\n';
  }
  wrote(cfg.output_dir / "evaluation.csv", eval.str());
  wrote(cfg.output_dir / "generalization.csv", gen.str());
  return 0;
}

std::vector<hmrs::ObjectiveVector> read_rows(const std::vector<std::string>& paths) {
  std::vector<hmrs::ObjectiveVector> rows;
  for (const auto& p : paths) {
    const auto part = hmrs::parse_objectives_csv(hmrs::read_text_file(p));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

int cmd_compare(const hmrs::RunConfig& cfg, const std::vector<std::string>& optimized,
                const std::vector<std::string>& random) {
  const hmrs::ComparisonReport report = hmrs::compare(read_rows(optimized), read_rows(random));
  const std::string table = hmrs::comparison_csv(report);
  wrote(cfg.output_dir / "comparison.csv", table);
  std::cout << table;
  std::cout << "discarded infeasible: optimized " << report.optimized_discarded << ", random "
            << report.random_discarded << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Select high-order metamorphic relation sets for an image classifier"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Run config (JSON with comments)");
  app.add_option("--seed", g.seed, "Master seed; overrides the config");
  app.add_option("--out", g.out, "Output directory; overrides HMRS_OUT_DIR and the config");
  app.add_option("--threads", g.threads, "Worker threads");

  auto* data = app.add_subcommand("data", "Write the synthetic digit splits as IDX files");
  auto* train = app.add_subcommand("train", "Train the toy classifier");
  std::string sets_path;
  auto* profile = app.add_subcommand("profile", "Emit certainty profiles and the validity bound as CSV");
  profile->add_option("--sets", sets_path, "Relation sets whose chains get their own curves")->check(CLI::ExistingFile);
  std::string resume_path;
  auto* select = app.add_subcommand("select", "Search for relation sets");
  select->add_option("--resume", resume_path, "Continue from a step checkpoint")->check(CLI::ExistingFile);
  auto* baseline = app.add_subcommand("baseline", "Sample and evaluate random relation sets");
  std::string split = "test";
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate saved relation sets on a dataset split");
  evaluate->add_option("--sets", sets_path, "Relation sets (front, knee or baseline file)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--split", split, "calibration or test")->check(CLI::IsMember({"calibration", "test"}));
  std::vector<std::string> optimized;
  std::vector<std::string> random;
  auto* compare = app.add_subcommand("compare", "Test optimised sets against random ones");
  compare->add_option("--optimized", optimized, "Objective CSVs of optimised sets")->required()->check(CLI::ExistingFile);
  compare->add_option("--random", random, "Objective CSVs of random sets")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const hmrs::RunConfig cfg = resolve_config(g);
    if (data->parsed()) return cmd_data(cfg);
    if (train->parsed()) return cmd_train(cfg);
    if (profile->parsed()) return cmd_profile(cfg, sets_path);
    if (select->parsed()) return cmd_select(cfg, resume_path);
    if (baseline->parsed()) return cmd_baseline(cfg);
    if (evaluate->parsed()) return cmd_evaluate(cfg, sets_path, split);
    if (compare->parsed()) return cmd_compare(cfg, optimized, random);
  } catch (const UsageError& e) {
    std::cerr << "hmrs: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hmrs: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
