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

// First-order linear-chain CRF over sparse feature templates.
//
// Weight layout: emission weights come first, indexed attribute * L + label
// where an attribute is one (template id, feature string) pair of the
// dictionary; the L x L transition block follows, indexed prev * L + label.

#ifndef LABELAUDIT_TAGGER_HPP_
#define LABELAUDIT_TAGGER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "labelaudit/corpus.hpp"
#include "labelaudit/rng.hpp"

namespace labelaudit::tagger {

using corpus::Dataset;
using corpus::Sentence;

enum class TemplateKind { kWord, kLowerWord, kShape, kPrefix, kSuffix, kPrevWord, kNextWord, kBias };

struct FeatureTemplate {
  std::string id;
  TemplateKind kind = TemplateKind::kBias;
  std::size_t affix = 0;  // k for prefix/suffix templates

  friend bool operator==(const FeatureTemplate&, const FeatureTemplate&) = default;
};

// Ids: w, lw, shape, p1..p3, s1..s3, w-1, w+1, bias.
FeatureTemplate template_from_id(std::string_view id);
std::vector<FeatureTemplate> templates_from_ids(std::span<const std::string> ids);
std::vector<FeatureTemplate> default_templates();

// Feature string of `tmpl` at token `pos`.
std::string extract_feature(const FeatureTemplate& tmpl, const Sentence& sentence, std::size_t pos);
std::string word_shape(std::string_view word);

struct TrainConfig {
  std::size_t epochs = 10;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  double adagrad_epsilon = 1e-8;
  std::uint64_t seed = 0;
  bool shuffle = true;
  // Diagnostic: one AdaGrad step per epoch on the exact full-batch objective.
  bool full_batch = false;
  std::size_t min_count = 1;

  void validate() const;  // throws ConfigError
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

class FeatureDictionary {
 public:
  FeatureDictionary() = default;
  // `attributes` must be sorted and unique.
  explicit FeatureDictionary(std::vector<std::pair<std::string, std::string>> attributes);

  std::size_t size() const { return attributes_.size(); }
  std::optional<std::uint32_t> find(std::string_view template_id, std::string_view value) const;
  const std::vector<std::pair<std::string, std::string>>& attributes() const { return attributes_; }

  friend bool operator==(const FeatureDictionary& a, const FeatureDictionary& b) {
    return a.attributes_ == b.attributes_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> attributes_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Every (template, feature string) pair seen at least min_count times, in
// lexicographic order. Each entry is crossed with every label in the model.
FeatureDictionary build_features(const Dataset& dataset, std::span<const FeatureTemplate> templates,
                                 std::size_t min_count);

// "O" followed by B-T, I-T for each type in sorted order.
std::vector<std::string> label_set(const std::set<std::string>& entity_types);

struct CrfModel {
  std::vector<std::string> labels;
  std::vector<FeatureTemplate> templates;
  FeatureDictionary features;
  std::vector<double> weights;
  TrainConfig config;

  CrfModel() = default;
  // Zero-weight model.
  CrfModel(std::vector<std::string> labels, std::vector<FeatureTemplate> templates,
           FeatureDictionary features, TrainConfig config = {});

  std::size_t num_labels() const { return labels.size(); }
  std::size_t emission_size() const { return features.size() * labels.size(); }
  std::size_t emission_index(std::size_t attribute, std::size_t label) const {
    return attribute * labels.size() + label;
  }
  std::size_t transition_index(std::size_t prev, std::size_t label) const {
    return emission_size() + prev * labels.size() + label;
  }
  std::optional<std::size_t> label_index(std::string_view label) const;

  friend bool operator==(const CrfModel&, const CrfModel&) = default;
};

// A sentence mapped onto model attribute ids. Unseen features are dropped.
struct EncodedSentence {
  std::vector<std::vector<std::uint32_t>> attributes;
  std::vector<std::size_t> gold;  // empty when unlabeled
  std::size_t size() const { return attributes.size(); }
};

EncodedSentence encode(const CrfModel& model, const Sentence& sentence, bool with_gold);

// Log-space scores: unary(i, l) and transition(p, l).
struct Potentials {
  std::size_t length = 0;
  std::size_t num_labels = 0;
  std::vector<double> unary;
  std::vector<double> transition;

  Potentials() = default;
  Potentials(std::size_t n, std::size_t labels)
      : length(n), num_labels(labels), unary(n * labels, 0.0), transition(labels * labels, 0.0) {}

  double& unary_at(std::size_t i, std::size_t l) { return unary[i * num_labels + l]; }
  double unary_at(std::size_t i, std::size_t l) const { return unary[i * num_labels + l]; }
  double& transition_at(std::size_t p, std::size_t l) { return transition[p * num_labels + l]; }
  double transition_at(std::size_t p, std::size_t l) const { return transition[p * num_labels + l]; }
};

Potentials sentence_potentials(const CrfModel& model, const Sentence& sentence);
Potentials sentence_potentials(const CrfModel& model, const EncodedSentence& sentence);

double path_score(const Potentials& potentials, std::span<const std::size_t> path);
double forward_log_partition(const Potentials& potentials);

struct Marginals {
  std::size_t length = 0;
  std::size_t num_labels = 0;
  double log_partition = 0.0;
  std::vector<double> node;  // length x L
  std::vector<double> edge;  // (length - 1) x L x L, edge i joins positions i and i + 1

  double node_at(std::size_t i, std::size_t l) const { return node[i * num_labels + l]; }
  double edge_at(std::size_t i, std::size_t p, std::size_t l) const {
    return edge[(i * num_labels + p) * num_labels + l];
  }
};

Marginals marginals(const Potentials& potentials);

struct ViterbiPath {
  std::vector<std::size_t> labels;
  double score = 0.0;
};

// Ties go to the lower label index.
ViterbiPath viterbi(const Potentials& potentials);

struct LikelihoodGradient {
  double log_likelihood = 0.0;
  std::vector<double> gradient;  // same indexing as CrfModel::weights
};

// Unregularized log p(gold | sentence) and its gradient.
LikelihoodGradient log_likelihood_grad(const CrfModel& model, const Sentence& sentence);

// Regularized objective sum_i log p(y_i | x_i) - l2 * |w|^2 / 2.
double objective(const CrfModel& model, std::span<const EncodedSentence> data);

// AdaGrad state that can keep training the same model on further data.
class Trainer {
 public:
  explicit Trainer(CrfModel model);

  // Runs model.config.epochs passes over `data`. Returns the regularized
  // objective after each epoch when `trace` is set.
  void fit(std::span<const EncodedSentence> data, std::vector<double>* trace = nullptr);

  const CrfModel& model() const { return model_; }
  CrfModel release() && { return std::move(model_); }

 private:
  void sgd_epoch(std::span<const EncodedSentence> data, std::size_t epoch);
  void batch_epoch(std::span<const EncodedSentence> data, std::size_t epoch);

  CrfModel model_;
  std::vector<double> accum_;
  Rng rng_;
};

struct TrainOptions {
  // Entity types to build labels for; defaults to the dataset's alphabet.
  std::optional<std::set<std::string>> entity_types;
  // Receives the per-epoch objective.
  std::vector<double>* trace = nullptr;
};

CrfModel train(const Dataset& dataset, std::span<const FeatureTemplate> templates,
               const TrainConfig& config, const TrainOptions& options = {});

std::vector<std::vector<std::string>> predict(const CrfModel& model,
                                              std::span<const Sentence> sentences);

std::string serialize_model(const CrfModel& model);
CrfModel deserialize_model(std::string_view text);
void save_model(const CrfModel& model, const std::string& path);
CrfModel load_model(const std::string& path);

}  // namespace labelaudit::tagger

#endif  // LABELAUDIT_TAGGER_HPP_
