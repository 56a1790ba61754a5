// Copyright 2026 The labelaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Model files are canonical JSON. Doubles are written in shortest
// round-trip form, so load(save(m)) reproduces every weight bit-exactly.

#include <cmath>
#include <fstream>
#include <sstream>

#include "labelaudit/errors.hpp"
#include "labelaudit/files.hpp"
#include "labelaudit/serialization.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::tagger {

namespace {
constexpr const char* kFormat = "labelaudit-crf";
constexpr int kVersion = 1;
}  // namespace

std::string serialize_model(const CrfModel& model) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["labels"] = model.labels;
  auto& tmpl = j["templates"] = nlohmann::json::array();
  for (const auto& t : model.templates) tmpl.push_back(t.id);
  j["config"] = model.config;
  auto& feats = j["features"] = nlohmann::json::array();
  for (const auto& [tid, value] : model.features.attributes()) feats.push_back({tid, value});
  j["weights"] = model.weights;
  return j.dump() + "\n";
}

CrfModel deserialize_model(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != kFormat) throw DataError("not a labelaudit model file");
    if (j.at("version") != kVersion)
      throw DataError("unsupported model version " + j.at("version").dump());
    std::vector<std::pair<std::string, std::string>> attrs;
    for (const auto& f : j.at("features")) attrs.emplace_back(f.at(0), f.at(1));
    CrfModel model(j.at("labels").get<std::vector<std::string>>(),
                   templates_from_ids(j.at("templates").get<std::vector<std::string>>()),
                   FeatureDictionary(std::move(attrs)), j.at("config").get<TrainConfig>());
    auto weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != model.weights.size())
      throw DataError("model has " + std::to_string(weights.size()) + " weights, expected " +
                      std::to_string(model.weights.size()));
    for (double w : weights) {
      if (!std::isfinite(w)) throw DataError("model contains a non-finite weight");
    }
    model.weights = std::move(weights);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const CrfModel& model, const std::string& path) {
  write_file_atomic(path, serialize_model(model));
}

CrfModel load_model(const std::string& path) { return deserialize_model(read_file(path)); }

}  // namespace labelaudit::tagger
