// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmrs/error.hpp"

namespace hmrs {

using nlohmann::json;

namespace {

json spec_to_json(const TransformSpec& spec) {
  std::vector<double> params(spec.params.begin(),
                             spec.params.begin() + static_cast<std::ptrdiff_t>(param_count(spec.kind)));
  return {{"kind", kind_name(spec.kind)}, {"params", params}, {"active", spec.active}};
}

TransformSpec spec_from_json(const json& j) {
  const auto name = j.at("kind").get<std::string>();
  const auto kind = parse_kind(name);
  require(kind.has_value(), Errc::MalformedFile, "unknown transform kind " + name);
  TransformSpec spec;
  spec.kind = *kind;
  const auto params = j.at("params").get<std::vector<double>>();
  require(params.size() == param_count(spec.kind), Errc::MalformedFile,
          name + " expects " + std::to_string(param_count(spec.kind)) + " parameters");
  for (std::size_t p = 0; p < params.size(); ++p) spec.params[p] = params[p];
  spec.active = j.value("active", true);
  return spec;
}

json objectives_to_json(const ObjectiveVector& v) {
  return {{"coverage", v.coverage},
          {"similarity", v.similarity},
          {"kill_ratio", v.kill_ratio},
          {"feasible", v.feasible}};
}

ObjectiveVector objectives_from_json(const json& j) {
  ObjectiveVector v;
  v.coverage = j.at("coverage").get<double>();
  v.similarity = j.at("similarity").get<double>();
  v.kill_ratio = j.at("kill_ratio").get<double>();
  v.feasible = j.at("feasible").get<bool>();
  return v;
}

json individual_to_json(const Individual& ind) {
  json chains = json::array();
  for (const HmrChain& chain : ind.chains) {
    json nodes = json::array();
    for (const TransformSpec& n : chain.nodes) nodes.push_back(spec_to_json(n));
    chains.push_back(std::move(nodes));
  }
  json j = {{"chains", std::move(chains)}};
  if (ind.objectives) j["objectives"] = objectives_to_json(*ind.objectives);
  return j;
}

Individual individual_from_json(const json& j) {
  Individual ind;
  for (const json& chain : j.at("chains")) {
    HmrChain c;
    for (const json& node : chain) c.nodes.push_back(spec_from_json(node));
    ind.chains.push_back(std::move(c));
  }
  if (j.contains("objectives")) ind.objectives = objectives_from_json(j["objectives"]);
  return ind;
}

json front_to_json(const ParetoFront& front) {
  json members = json::array();
  for (const Individual& m : front.members) members.push_back(individual_to_json(m));
  return {{"feasible_empty", front.feasible_empty},
          {"evaluations", front.evaluations},
          {"generations", front.generations},
          {"members", std::move(members)}};
}

ParetoFront front_from_json(const json& j) {
  ParetoFront front;
  front.feasible_empty = j.value("feasible_empty", false);
  front.evaluations = j.value("evaluations", std::size_t{0});
  front.generations = j.value("generations", std::size_t{0});
  for (const json& m : j.at("members")) front.members.push_back(individual_from_json(m));
  return front;
}

template <typename Fn>
auto parse_guarded(std::string_view text, std::string_view what, Fn&& fn) {
  try {
    return fn(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFile, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  require(ec == std::errc{}, Errc::InvalidArgument, "cannot format number");
  return {buf, end};
}

std::string serialize_individuals(std::span<const Individual> individuals) {
  json j = {{"version", 1}, {"sets", json::array()}};
  for (const Individual& ind : individuals) j["sets"].push_back(individual_to_json(ind));
  return j.dump(2) + "\n";
}

std::vector<Individual> parse_individuals(std::string_view text) {
  return parse_guarded(text, "relation set file", [](const json& j) {
    std::vector<Individual> out;
    const json& sets = j.contains("sets") ? j["sets"] : j.at("members");
    for (const json& s : sets) out.push_back(individual_from_json(s));
    return out;
  });
}

std::string serialize_front(const ParetoFront& front, std::optional<std::size_t> knee) {
  json j = front_to_json(front);
  j["version"] = 1;
  if (knee) j["knee"] = *knee;
  return j.dump(2) + "\n";
}

ParetoFront parse_front(std::string_view text) {
  return parse_guarded(text, "front file", [](const json& j) { return front_from_json(j); });
}

std::string serialize_checkpoint(const StepRecord& record, std::uint64_t seed) {
  json j = {{"version", 1},
            {"seed", seed},
            {"step", record.step},
            {"subset", record.subset},
            {"front", front_to_json(record.front)}};
  return j.dump(2) + "\n";
}

std::pair<StepRecord, std::uint64_t> parse_checkpoint(std::string_view text) {
  return parse_guarded(text, "checkpoint", [](const json& j) {
    StepRecord r;
    r.step = j.at("step").get<std::size_t>();
    r.subset = j.at("subset").get<std::vector<std::size_t>>();
    r.front = front_from_json(j.at("front"));
    return std::pair{std::move(r), j.at("seed").get<std::uint64_t>()};
  });
}

std::string objectives_csv(std::span<const ObjectiveVector> rows, std::span<const std::string> labels) {
  std::ostringstream out;
  out << "label,coverage,similarity,kill_ratio,feasible\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << (i < labels.size() ? labels[i] : std::to_string(i)) << ',' << format_double(rows[i].coverage)
        << ',' << format_double(rows[i].similarity) << ',' << format_double(rows[i].kill_ratio) << ','
        << (rows[i].feasible ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<ObjectiveVector> parse_objectives_csv(std::string_view text) {
  std::vector<ObjectiveVector> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      require(line.rfind("label,coverage,similarity,kill_ratio,feasible", 0) == 0, Errc::MalformedFile,
              "objective CSV has an unexpected header");
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() >= 5, Errc::MalformedFile, "objective CSV row needs 5 cells: " + line);
    try {
      ObjectiveVector v;
      v.coverage = std::stod(cells[1]);
      v.similarity = std::stod(cells[2]);
      v.kill_ratio = std::stod(cells[3]);
      v.feasible = cells[4] == "1" || cells[4] == "true";
      rows.push_back(v);
    } catch (const std::exception&) {
      throw Error(Errc::MalformedFile, "bad number in objective CSV row: " + line);
    }
  }
  return rows;
}

std::string curves_csv(std::span<const std::pair<std::string, std::vector<double>>> curves,
                       std::span<const double> thresholds) {
  std::ostringstream out;
  out << "threshold";
  for (const auto& [name, values] : curves) {
    require(values.size() == thresholds.size(), Errc::GridMismatch, "curve " + name + " has wrong length");
    out << ',' << name;
  }
  out << '\n';
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    out << format_double(thresholds[k]);
    for (const auto& curve : curves) out << ',' << format_double(curve.second[k]);
    out << '\n';
  }
  return out.str();
}

std::string comparison_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "criterion,optimized_mean,optimized_sd,random_mean,random_sd,u,p_value,exact,cliffs_delta,"
         "magnitude,optimized_n,random_n,optimized_discarded,random_discarded\n";
  for (const CriterionComparison& c : report.criteria) {
    out << criterion_name(c.criterion) << ',' << format_double(c.optimized_mean) << ','
        << format_double(c.optimized_sd) << ',' << format_double(c.random_mean) << ','
        << format_double(c.random_sd) << ',' << format_double(c.test.u) << ','
        << format_double(c.test.p) << ',' << (c.test.exact ? 1 : 0) << ','
        << format_double(c.effect.delta) << ',' << magnitude_name(c.effect.magnitude) << ','
        << report.optimized_used << ',' << report.random_used << ',' << report.optimized_discarded
        << ',' << report.random_discarded << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::Io, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(out), Errc::Io, "write failed for " + path.string());
}

}  // namespace hmrs
