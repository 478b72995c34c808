// Copyright 2026 The hmrs Authors
// SPDX-License-Identifier: Apache-2.0

#include "hmrs/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmrs/error.hpp"

namespace hmrs {

using nlohmann::json;

std::string serialize_model(const Mlp& model) {
  json doc;
  doc["version"] = kModelFormatVersion;
  doc["input_dim"] = model.input_dim();
  doc["num_classes"] = model.num_classes();
  json layers = json::array();
  for (const DenseLayer& layer : model.layers()) {
    json rows = json::array();
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      rows.push_back(std::vector<double>(layer.weights.begin() + o * layer.inputs,
                                         layer.weights.begin() + (o + 1) * layer.inputs));
    }
    layers.push_back({{"w", rows},
                      {"b", layer.bias},
                      {"act", layer.activation == Activation::Relu ? "relu" : "softmax"},
                      {"dropout", layer.dropout}});
  }
  doc["layers"] = std::move(layers);
  return doc.dump() + "\n";
}

Mlp parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFile, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    require(doc.is_object(), Errc::MalformedFile, "model file must hold an object");
    const int version = doc.at("version").get<int>();
    require(version == kModelFormatVersion, Errc::MalformedFile,
            "unsupported model format version " + std::to_string(version));
    std::vector<DenseLayer> layers;
    for (const json& entry : doc.at("layers")) {
      DenseLayer layer;
      const json& rows = entry.at("w");
      require(rows.is_array() && !rows.empty(), Errc::ShapeMismatch, "layer without weights");
      layer.outputs = rows.size();
      layer.inputs = rows.front().size();
      for (const json& row : rows) {
        require(row.size() == layer.inputs, Errc::ShapeMismatch, "ragged weight matrix");
        for (const json& v : row) layer.weights.push_back(v.get<double>());
      }
      layer.bias = entry.at("b").get<std::vector<double>>();
      const auto act = entry.at("act").get<std::string>();
      require(act == "relu" || act == "softmax", Errc::MalformedFile, "unknown activation " + act);
      layer.activation = act == "relu" ? Activation::Relu : Activation::Softmax;
      layer.dropout = entry.value("dropout", 0.0);
      layers.push_back(std::move(layer));
    }
    Mlp model(std::move(layers));
    if (doc.contains("input_dim")) {
      require(doc["input_dim"].get<std::size_t>() == model.input_dim(), Errc::ShapeMismatch,
              "input_dim disagrees with first layer");
    }
    if (doc.contains("num_classes")) {
      require(doc["num_classes"].get<std::size_t>() == model.num_classes(), Errc::ShapeMismatch,
              "num_classes disagrees with last layer");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFile, std::string("bad model file: ") + e.what());
  }
}

void save_model(const Mlp& model, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::Io, "cannot write " + path.string());
  out << serialize_model(model);
  require(static_cast<bool>(out), Errc::Io, "write failed for " + path.string());
}

Mlp load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::Io, "cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

}  // namespace hmrs
