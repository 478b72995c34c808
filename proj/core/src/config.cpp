// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "hmrs/digits.hpp"
#include "hmrs/error.hpp"
#include "hmrs/idx.hpp"
#include "hmrs/report.hpp"
#include "hmrs/rng.hpp"

namespace hmrs {

using nlohmann::json;

namespace {

constexpr std::string_view kDefaultConfig = R"(// hmrs run configuration. Flat keys; relative paths resolve against this file.
{
  "seed": 1,
  "output_dir": "hmrs-out",
  "threads": 1,

  // Model file written by `train` and read by every other subcommand.
  "model": "model.json",

  // IDX datasets. Leave a split out to use the synthetic 8x8 digit generator.
  // "calibration_images": "cal-images.idx", "calibration_labels": "cal-labels.idx",
  // "test_images": "test-images.idx", "test_labels": "test-labels.idx",
  // "train_images": "train-images.idx", "train_labels": "train-labels.idx",
  // "ood_images": "ood-images.idx",
  "synthetic_seed": 7,
  "synthetic_train": 1000,
  "synthetic_calibration": 750,
  "synthetic_test": 750,

  // Toy network trained by `train`.
  "hidden_layers": [64, 32],
  "dropout": [0.25, 0.25],
  "epochs": 60,
  "learning_rate": 0.05,
  "batch_size": 16,

  // Coverage: "nc" (neuron coverage) or "dsa" (surprise adequacy buckets).
  "coverage": "nc",
  "nc_threshold": 0.25,      // activation above this counts as covered
  "dsa_buckets": 1000,
  "dsa_upper": 2.0,
  "dsa_bank_cap": 2000,

  // Search.
  "population": 50,
  "evaluations": 200,        // per restart, initial population included; DSA runs usually use 100
  "max_generations": 0,      // 0 = no generation cap
  "steps": 5,                // restarts
  "uncertain_fraction": 0.04,
  "subset_fraction": 0.10,
  "crossover_rate": 0.8,
  "mutation_rate": 0.2,
  "mutation_change": 0.7,
  "mutation_nullify": 0.2,
  "mutation_reinit": 0.1,
  "max_chains": 5,           // chains per relation set
  "max_depth": 3,            // transformations per chain

  // Uncertainty gate.
  "grid_step": 0.01,
  "search_samples": 30,      // MC-dropout samples while searching
  "final_samples": 100,      // MC-dropout samples for verification and profiles
  "ranking_samples": 10,
  "tolerance": 0.01,
  "gating_inputs": 64,
  "noise_count": 0,          // 0 = as many noise images as calibration inputs

  "fgsm_epsilon": 0.2,
  "random_sets": 30,

  // Transformation parameter ranges.
  "bounds_rotation": [-10, 10],
  "bounds_translation": [[-2, 2], [-2, 2]],
  "bounds_scale": [[0.9, 1.1], [0.9, 1.1]],
  "bounds_shear": [[-0.1, 0.1], [-0.1, 0.1]],
  "bounds_blur": [[0, 1.5], [0, 1.5]],
  "bounds_contrast": [1, 2]
}
)";

template <typename T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::InvalidArgument, "config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& v, const std::string& key) {
  require(v.is_number_integer() && v.get<long long>() >= 0, Errc::InvalidArgument,
          "config key '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& key) {
  require(v.is_number(), Errc::InvalidArgument, "config key '" + key + "' must be a number");
  const double d = v.get<double>();
  require(std::isfinite(d), Errc::InvalidArgument, "config key '" + key + "' must be finite");
  return d;
}

Interval get_interval(const json& v, const std::string& key) {
  require(v.is_array() && v.size() == 2, Errc::InvalidArgument,
          "config key '" + key + "' must be [lo, hi]");
  return {get_number(v[0], key), get_number(v[1], key)};
}

void set_bounds(BoundsTable& table, TransformKind kind, const json& v, const std::string& key) {
  if (param_count(kind) == 1) {
    table.set(kind, 0, get_interval(v, key));
    return;
  }
  require(v.is_array() && v.size() == 2, Errc::InvalidArgument,
          "config key '" + key + "' must be [[lo, hi], [lo, hi]] or [lo, hi]");
  if (v[0].is_number()) {
    const Interval both = get_interval(v, key);
    table.set(kind, 0, both);
    table.set(kind, 1, both);
    return;
  }
  table.set(kind, 0, get_interval(v[0], key));
  table.set(kind, 1, get_interval(v[1], key));
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& v, const std::string& key) {
  std::filesystem::path p = get_as<std::string>(v, key);
  return p.is_absolute() || base.empty() ? p : base / p;
}

void check_paths(const std::optional<DatasetPaths>& paths, const char* name) {
  if (!paths) return;
  for (const auto& p : {paths->images, paths->labels}) {
    require(std::filesystem::exists(p), Errc::InvalidArgument,
            std::string(name) + " file not found: " + p.string());
  }
}

}  // namespace

void RunConfig::validate() const {
  selection.search.validate();
  selection.coverage.validate();
  selection.uncertainty.validate();
  require(!architecture.hidden.empty(), Errc::InvalidArgument, "hidden_layers must not be empty");
  require(architecture.hidden.size() == architecture.dropout.size(), Errc::InvalidArgument,
          "dropout needs one rate per hidden layer");
  for (std::size_t h : architecture.hidden) {
    require(h > 0, Errc::InvalidArgument, "hidden layer widths must be positive");
  }
  for (double r : architecture.dropout) {
    require(r >= 0.0 && r < 1.0, Errc::InvalidArgument, "dropout rates must lie in [0, 1)");
  }
  require(training.epochs > 0 && training.batch_size > 0, Errc::InvalidArgument,
          "epochs and batch_size must be positive");
  require(training.learning_rate > 0.0, Errc::InvalidArgument, "learning_rate must be positive");
  require(fgsm_epsilon >= 0.0 && fgsm_epsilon <= 1.0, Errc::InvalidArgument,
          "fgsm_epsilon must lie in [0, 1]");
  require(random_sets > 0, Errc::InvalidArgument, "random_sets must be positive");
  require(synthetic.train > 0 && synthetic.calibration > 0 && synthetic.test > 0,
          Errc::InvalidArgument, "synthetic split sizes must be positive");
  check_paths(train, "train");
  check_paths(calibration, "calibration");
  check_paths(test, "test");
  if (ood_images) {
    require(std::filesystem::exists(*ood_images), Errc::InvalidArgument,
            "ood_images file not found: " + ood_images->string());
  }
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  require(root.is_object(), Errc::InvalidArgument, "config must be a JSON object");

  RunConfig cfg;
  SearchConfig& search = cfg.selection.search;
  UncertaintySettings& unc = cfg.selection.uncertainty;
  CoverageConfig& cov = cfg.selection.coverage;
  std::map<std::string, std::filesystem::path> split_paths;

  using Setter = std::function<void(const json&, const std::string&)>;
  const auto count = [](std::size_t& field) {
    return Setter([&field](const json& v, const std::string& k) { field = get_count(v, k); });
  };
  const auto number = [](double& field) {
    return Setter([&field](const json& v, const std::string& k) { field = get_number(v, k); });
  };
  const auto path_key = [&](const std::string& name) {
    return Setter([&, name](const json& v, const std::string& k) { split_paths[name] = resolve(base_dir, v, k); });
  };
  const auto bounds = [&](TransformKind kind) {
    return Setter([&, kind](const json& v, const std::string& k) { set_bounds(cfg.selection.bounds, kind, v, k); });
  };

  const std::map<std::string, Setter> setters = {
      {"seed", [&](const json& v, const std::string& k) { cfg.seed = get_count(v, k); }},
      {"output_dir", [&](const json& v, const std::string& k) { cfg.output_dir = resolve(base_dir, v, k); }},
      {"threads", count(search.threads)},
      {"model", [&](const json& v, const std::string& k) { cfg.model = resolve(base_dir, v, k); }},
      {"train_images", path_key("train_images")},
      {"train_labels", path_key("train_labels")},
      {"calibration_images", path_key("calibration_images")},
      {"calibration_labels", path_key("calibration_labels")},
      {"test_images", path_key("test_images")},
      {"test_labels", path_key("test_labels")},
      {"ood_images", [&](const json& v, const std::string& k) { cfg.ood_images = resolve(base_dir, v, k); }},
      {"synthetic_seed", [&](const json& v, const std::string& k) { cfg.synthetic.seed = get_count(v, k); }},
      {"synthetic_train", count(cfg.synthetic.train)},
      {"synthetic_calibration", count(cfg.synthetic.calibration)},
      {"synthetic_test", count(cfg.synthetic.test)},
      {"hidden_layers",
       [&](const json& v, const std::string& k) { cfg.architecture.hidden = get_as<std::vector<std::size_t>>(v, k); }},
      {"dropout",
       [&](const json& v, const std::string& k) { cfg.architecture.dropout = get_as<std::vector<double>>(v, k); }},
      {"epochs", count(cfg.training.epochs)},
      {"learning_rate", number(cfg.training.learning_rate)},
      {"batch_size", count(cfg.training.batch_size)},
      {"coverage",
       [&](const json& v, const std::string& k) {
         const auto name = get_as<std::string>(v, k);
         require(name == "nc" || name == "dsa", Errc::InvalidArgument, "coverage must be \"nc\" or \"dsa\"");
         cov.criterion = name == "nc" ? CoverageCriterion::NC : CoverageCriterion::DSA;
       }},
      {"nc_threshold", number(cov.nc_threshold)},
      {"dsa_buckets", count(cov.dsa_buckets)},
      {"dsa_upper", number(cov.dsa_upper)},
      {"dsa_bank_cap", count(cov.dsa_bank_cap)},
      {"population", count(search.population)},
      {"evaluations", count(search.evaluations)},
      {"max_generations", count(search.max_generations)},
      {"steps", count(search.steps)},
      {"uncertain_fraction", number(search.uncertain_fraction)},
      {"subset_fraction", number(search.subset_fraction)},
      {"crossover_rate", number(search.crossover_rate)},
      {"mutation_rate", number(search.mutation_rate)},
      {"mutation_change", number(search.mutation_mix.change)},
      {"mutation_nullify", number(search.mutation_mix.nullify)},
      {"mutation_reinit", number(search.mutation_mix.reinit)},
      {"max_chains", count(search.max_chains)},
      {"max_depth", count(search.max_depth)},
      {"grid_step", number(unc.grid_step)},
      {"search_samples", count(unc.search_samples)},
      {"final_samples", count(unc.final_samples)},
      {"ranking_samples", count(unc.ranking_samples)},
      {"tolerance", number(unc.tolerance)},
      {"gating_inputs", count(unc.gating_inputs)},
      {"noise_count", count(unc.noise_count)},
      {"fgsm_epsilon", number(cfg.fgsm_epsilon)},
      {"random_sets", count(cfg.random_sets)},
      {"bounds_rotation", bounds(TransformKind::Rotation)},
      {"bounds_translation", bounds(TransformKind::Translation)},
      {"bounds_scale", bounds(TransformKind::Scale)},
      {"bounds_shear", bounds(TransformKind::Shear)},
      {"bounds_blur", bounds(TransformKind::Blur)},
      {"bounds_contrast", bounds(TransformKind::Contrast)},
  };

  for (const auto& [key, value] : root.items()) {
    const auto it = setters.find(key);
    require(it != setters.end(), Errc::InvalidArgument, "unknown config key '" + key + "'");
    it->second(value, key);
  }

  const auto pair_of = [&](const std::string& split) -> std::optional<DatasetPaths> {
    const auto img = split_paths.find(split + "_images");
    const auto lbl = split_paths.find(split + "_labels");
    if (img == split_paths.end() && lbl == split_paths.end()) return std::nullopt;
    require(img != split_paths.end() && lbl != split_paths.end(), Errc::InvalidArgument,
            split + "_images and " + split + "_labels must be given together");
    return DatasetPaths{img->second, lbl->second};
  };
  cfg.train = pair_of("train");
  cfg.calibration = pair_of("calibration");
  cfg.test = pair_of("test");
  search.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  require(std::filesystem::is_regular_file(path), Errc::InvalidArgument,
          "config file not found: " + path.string());
  return parse_config(read_text_file(path), path.parent_path());
}

std::string_view split_name(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Calibration: return "calibration";
    case Split::Test: return "test";
  }
  return "?";
}

Dataset load_split(const RunConfig& config, Split split) {
  const std::optional<DatasetPaths>& paths =
      split == Split::Train ? config.train : split == Split::Calibration ? config.calibration : config.test;
  if (paths) return load_idx(paths->images, paths->labels);
  const std::size_t n = split == Split::Train         ? config.synthetic.train
                        : split == Split::Calibration ? config.synthetic.calibration
                                                      : config.synthetic.test;
  return synthetic_digits(n, derive_seed(config.synthetic.seed, {static_cast<std::uint64_t>(split)}));
}

std::string default_config_text() { return std::string(kDefaultConfig); }

}  // namespace hmrs
