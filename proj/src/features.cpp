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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "labelaudit/errors.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::tagger {

namespace {

bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

// Byte offset just past the first k code points.
std::size_t prefix_bytes(std::string_view w, std::size_t k) {
  std::size_t i = 0;
  for (std::size_t n = 0; n < k && i < w.size(); ++n) {
    ++i;
    while (i < w.size() && is_continuation(w[i])) ++i;
  }
  return i;
}

// Byte offset where the last k code points begin.
std::size_t suffix_start(std::string_view w, std::size_t k) {
  std::size_t i = w.size();
  for (std::size_t n = 0; n < k && i > 0; ++n) {
    --i;
    while (i > 0 && is_continuation(w[i])) --i;
  }
  return i;
}

std::string joined_key(std::string_view template_id, std::string_view value) {
  std::string key;
  key.reserve(template_id.size() + value.size() + 1);
  key.append(template_id);
  key.push_back('\x1f');
  key.append(value);
  return key;
}

}  // namespace

FeatureTemplate template_from_id(std::string_view id) {
  FeatureTemplate t{std::string(id), TemplateKind::kBias, 0};
  if (id == "w") {
    t.kind = TemplateKind::kWord;
  } else if (id == "lw") {
    t.kind = TemplateKind::kLowerWord;
  } else if (id == "shape") {
    t.kind = TemplateKind::kShape;
  } else if (id == "w-1") {
    t.kind = TemplateKind::kPrevWord;
  } else if (id == "w+1") {
    t.kind = TemplateKind::kNextWord;
  } else if (id == "bias") {
    t.kind = TemplateKind::kBias;
  } else if (id.size() == 2 && (id[0] == 'p' || id[0] == 's') && id[1] >= '1' && id[1] <= '3') {
    t.kind = id[0] == 'p' ? TemplateKind::kPrefix : TemplateKind::kSuffix;
    t.affix = static_cast<std::size_t>(id[1] - '0');
  } else {
    throw ConfigError("unknown feature template '" + std::string(id) + "'");
  }
  return t;
}

std::vector<FeatureTemplate> templates_from_ids(std::span<const std::string> ids) {
  std::vector<FeatureTemplate> out;
  for (const auto& id : ids) out.push_back(template_from_id(id));
  return out;
}

std::vector<FeatureTemplate> default_templates() {
  static const std::string kIds[] = {"bias", "w", "lw", "shape", "p1", "p2", "p3",
                                     "s1", "s2", "s3", "w-1", "w+1"};
  return templates_from_ids(kIds);
}

std::string word_shape(std::string_view word) {
  std::string shape;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    char s;
    if (std::isupper(u)) {
      s = 'X';
    } else if (std::islower(u)) {
      s = 'x';
    } else if (std::isdigit(u)) {
      s = 'd';
    } else if (u >= 0x80) {
      if (is_continuation(c)) continue;
      s = 'u';
    } else {
      s = c;
    }
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

std::string extract_feature(const FeatureTemplate& tmpl, const Sentence& sentence,
                            std::size_t pos) {
  const std::string& word = sentence.tokens[pos].text;
  switch (tmpl.kind) {
    case TemplateKind::kWord:
      return word;
    case TemplateKind::kLowerWord: {
      std::string lower = word;
      for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      return lower;
    }
    case TemplateKind::kShape:
      return word_shape(word);
    case TemplateKind::kPrefix:
      return word.substr(0, prefix_bytes(word, tmpl.affix));
    case TemplateKind::kSuffix:
      return word.substr(suffix_start(word, tmpl.affix));
    case TemplateKind::kPrevWord:
      return pos == 0 ? std::string("<s>") : sentence.tokens[pos - 1].text;
    case TemplateKind::kNextWord:
      return pos + 1 == sentence.size() ? std::string("</s>") : sentence.tokens[pos + 1].text;
    case TemplateKind::kBias:
      return "1";
  }
  return {};
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!std::isfinite(learning_rate) || learning_rate <= 0.0)
    throw ConfigError("learning rate must be positive and finite");
  if (!std::isfinite(l2) || l2 < 0.0) throw ConfigError("l2 must be non-negative and finite");
  if (!std::isfinite(adagrad_epsilon) || adagrad_epsilon <= 0.0)
    throw ConfigError("adagrad epsilon must be positive and finite");
}

FeatureDictionary::FeatureDictionary(std::vector<std::pair<std::string, std::string>> attributes)
    : attributes_(std::move(attributes)) {
  index_.reserve(attributes_.size());
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    const auto [it, inserted] = index_.emplace(
        joined_key(attributes_[i].first, attributes_[i].second), static_cast<std::uint32_t>(i));
    if (!inserted || (i > 0 && !(attributes_[i - 1] < attributes_[i])))
      throw DataError("feature dictionary entries must be sorted and unique");
  }
}

std::optional<std::uint32_t> FeatureDictionary::find(std::string_view template_id,
                                                     std::string_view value) const {
  const auto it = index_.find(joined_key(template_id, value));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureDictionary build_features(const Dataset& dataset, std::span<const FeatureTemplate> templates,
                                 std::size_t min_count) {
  if (dataset.empty()) throw DataError("cannot build features from an empty dataset");
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& sentence : dataset.sentences()) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      for (const auto& t : templates) ++counts[{t.id, extract_feature(t, sentence, i)}];
    }
  }
  std::vector<std::pair<std::string, std::string>> kept;
  for (auto& [key, n] : counts) {
    if (n >= min_count) kept.push_back(key);
  }
  return FeatureDictionary(std::move(kept));
}

std::vector<std::string> label_set(const std::set<std::string>& entity_types) {
  std::vector<std::string> labels{std::string(corpus::kOutside)};
  for (const auto& t : entity_types) {
    labels.push_back("B-" + t);
    labels.push_back("I-" + t);
  }
  return labels;
}

CrfModel::CrfModel(std::vector<std::string> labels_, std::vector<FeatureTemplate> templates_,
                   FeatureDictionary features_, TrainConfig config_)
    : labels(std::move(labels_)),
      templates(std::move(templates_)),
      features(std::move(features_)),
      config(config_) {
  if (std::ranges::find(labels, corpus::kOutside) == labels.end())
    throw DataError("label set must contain \"O\"");
  weights.assign(emission_size() + labels.size() * labels.size(), 0.0);
}

std::optional<std::size_t> CrfModel::label_index(std::string_view label) const {
  const auto it = std::ranges::find(labels, label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

EncodedSentence encode(const CrfModel& model, const Sentence& sentence, bool with_gold) {
  EncodedSentence out;
  out.attributes.resize(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    for (const auto& t : model.templates) {
      if (auto id = model.features.find(t.id, extract_feature(t, sentence, i)))
        out.attributes[i].push_back(*id);
    }
  }
  if (with_gold) {
    out.gold.reserve(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const auto idx = model.label_index(sentence.tokens[i].label);
      if (!idx)
        throw DataError("label '" + sentence.tokens[i].label + "' at position " +
                        std::to_string(i) + " is not in the model's label set");
      out.gold.push_back(*idx);
    }
  }
  return out;
}

}  // namespace labelaudit::tagger
