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

#include <cmath>
#include <numeric>

#include "labelaudit/errors.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::tagger {

namespace detail {
double accumulate_gradient(const CrfModel& model, const EncodedSentence& s, std::span<double> grad);
}  // namespace detail

namespace {

// One AdaGrad ascent step on coordinate j of the regularized objective.
inline void adagrad_step(std::vector<double>& w, std::vector<double>& accum, std::size_t j,
                         double g, const TrainConfig& c) {
  g -= c.l2 * w[j];
  accum[j] += g * g;
  w[j] += c.learning_rate * g / (std::sqrt(accum[j]) + c.adagrad_epsilon);
}

void check_finite(double ll, std::size_t sentence, std::size_t epoch) {
  if (!std::isfinite(ll))
    throw NumericError("non-finite log-likelihood at sentence " + std::to_string(sentence) +
                       " in epoch " + std::to_string(epoch));
}

}  // namespace

Trainer::Trainer(CrfModel model)
    : model_(std::move(model)), accum_(model_.weights.size(), 0.0), rng_(model_.config.seed) {
  model_.config.validate();
}

void Trainer::fit(std::span<const EncodedSentence> data, std::vector<double>* trace) {
  for (std::size_t epoch = 0; epoch < model_.config.epochs; ++epoch) {
    if (model_.config.full_batch) {
      batch_epoch(data, epoch);
    } else {
      sgd_epoch(data, epoch);
    }
    if (trace) trace->push_back(objective(model_, data));
  }
}

void Trainer::sgd_epoch(std::span<const EncodedSentence> data, std::size_t epoch) {
  const TrainConfig& c = model_.config;
  const std::size_t L = model_.num_labels();
  const std::size_t emission = model_.emission_size();
  auto& w = model_.weights;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  if (c.shuffle) rng_.shuffle(std::span(order));

  std::vector<double> grad(w.size(), 0.0);
  std::vector<char> seen(model_.features.size(), 0);
  std::vector<std::uint32_t> touched;

  for (std::size_t idx : order) {
    const EncodedSentence& s = data[idx];
    const double ll = detail::accumulate_gradient(model_, s, grad);
    check_finite(ll, idx, epoch);

    touched.clear();
    for (const auto& attrs : s.attributes) {
      for (std::uint32_t a : attrs) {
        if (!seen[a]) {
          seen[a] = 1;
          touched.push_back(a);
        }
      }
    }
    // L2 is applied lazily: only to coordinates this sentence touches.
    for (std::uint32_t a : touched) {
      seen[a] = 0;
      for (std::size_t l = 0; l < L; ++l) {
        const std::size_t j = static_cast<std::size_t>(a) * L + l;
        adagrad_step(w, accum_, j, grad[j], c);
        grad[j] = 0.0;
      }
    }
    for (std::size_t j = emission; j < w.size(); ++j) {
      adagrad_step(w, accum_, j, grad[j], c);
      grad[j] = 0.0;
    }
  }
}

void Trainer::batch_epoch(std::span<const EncodedSentence> data, std::size_t epoch) {
  auto& w = model_.weights;
  std::vector<double> grad(w.size(), 0.0);
  for (std::size_t idx = 0; idx < data.size(); ++idx)
    check_finite(detail::accumulate_gradient(model_, data[idx], grad), idx, epoch);
  for (std::size_t j = 0; j < w.size(); ++j) adagrad_step(w, accum_, j, grad[j], model_.config);
}

CrfModel train(const Dataset& dataset, std::span<const FeatureTemplate> templates,
               const TrainConfig& config, const TrainOptions& options) {
  config.validate();
  if (dataset.empty()) throw DataError("cannot train on an empty dataset");
  const auto& types = options.entity_types ? *options.entity_types : dataset.label_alphabet();
  CrfModel model(label_set(types), {templates.begin(), templates.end()},
                 build_features(dataset, templates, config.min_count), config);

  std::vector<EncodedSentence> encoded;
  encoded.reserve(dataset.size());
  for (const auto& s : dataset.sentences()) encoded.push_back(encode(model, s, true));

  Trainer trainer(std::move(model));
  trainer.fit(encoded, options.trace);
  return std::move(trainer).release();
}

std::vector<std::vector<std::string>> predict(const CrfModel& model,
                                              std::span<const Sentence> sentences) {
  std::vector<std::vector<std::string>> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    const ViterbiPath path = viterbi(sentence_potentials(model, s));
    std::vector<std::string> labels;
    labels.reserve(path.labels.size());
    for (std::size_t l : path.labels) labels.push_back(model.labels[l]);
    out.push_back(corpus::repair_bio2(labels));
  }
  return out;
}

}  // namespace labelaudit::tagger
