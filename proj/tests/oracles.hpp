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

// Test-only reference implementations. None of these call into the
// inference or evaluation code they are used to check.

#ifndef LABELAUDIT_TESTS_ORACLES_HPP_
#define LABELAUDIT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "labelaudit/corpus.hpp"
#include "labelaudit/rng.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::oracle {

// Calls fn(path) for each of L^n label paths.
template <typename Fn>
void for_each_path(std::size_t n, std::size_t L, Fn&& fn) {
  std::vector<std::size_t> path(n, 0);
  for (;;) {
    fn(static_cast<const std::vector<std::size_t>&>(path));
    std::size_t i = 0;
    while (i < n && ++path[i] == L) path[i++] = 0;
    if (i == n) return;
  }
}

inline double score(const tagger::Potentials& p, const std::vector<std::size_t>& path) {
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    s += p.unary[i * p.num_labels + path[i]];
    if (i > 0) s += p.transition[path[i - 1] * p.num_labels + path[i]];
  }
  return s;
}

struct Enumeration {
  double log_z = 0.0;
  double max_score = -std::numeric_limits<double>::infinity();
  std::vector<double> node;  // n x L marginals
};

inline Enumeration enumerate(const tagger::Potentials& p) {
  const std::size_t n = p.length, L = p.num_labels;
  Enumeration e;
  // Two passes: find the max for a stable log-sum, then accumulate.
  for_each_path(n, L, [&](const auto& path) { e.max_score = std::max(e.max_score, score(p, path)); });
  double total = 0.0;
  e.node.assign(n * L, 0.0);
  for_each_path(n, L, [&](const auto& path) {
    const double w = std::exp(score(p, path) - e.max_score);
    total += w;
    for (std::size_t i = 0; i < n; ++i) e.node[i * L + path[i]] += w;
  });
  for (double& v : e.node) v /= total;
  e.log_z = e.max_score + std::log(total);
  return e;
}

// Unary scores by scanning the dictionary's attribute list directly.
inline std::vector<double> unary_by_enumeration(const tagger::CrfModel& model,
                                                const corpus::Sentence& sentence) {
  const std::size_t L = model.num_labels();
  std::vector<double> unary(sentence.size() * L, 0.0);
  const auto& attrs = model.features.attributes();
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    for (const auto& t : model.templates) {
      const std::string value = tagger::extract_feature(t, sentence, i);
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        if (attrs[a].first == t.id && attrs[a].second == value) {
          for (std::size_t l = 0; l < L; ++l) unary[i * L + l] += model.weights[a * L + l];
        }
      }
    }
  }
  return unary;
}

using SpanKey = std::tuple<std::size_t, std::size_t, std::size_t, std::string>;

// Materializes every span with a naive scan and intersects the sets.
struct SpanCounts {
  std::size_t tp = 0, predicted = 0, gold = 0;
};

inline std::set<SpanKey> naive_spans(std::size_t sentence, const std::vector<std::string>& tags) {
  std::set<SpanKey> out;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i][0] != 'B') {
      ++i;
      continue;
    }
    const std::string type = tags[i].substr(2);
    std::size_t j = i + 1;
    while (j < tags.size() && tags[j] == "I-" + type) ++j;
    out.emplace(sentence, i, j, type);
    i = j;
  }
  return out;
}

inline SpanCounts span_set_counts(const std::vector<std::vector<std::string>>& gold,
                                  const std::vector<std::vector<std::string>>& pred,
                                  const std::string& only_type = {}) {
  std::set<SpanKey> g, p;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (auto& k : naive_spans(s, gold[s]))
      if (only_type.empty() || std::get<3>(k) == only_type) g.insert(k);
    for (auto& k : naive_spans(s, pred[s]))
      if (only_type.empty() || std::get<3>(k) == only_type) p.insert(k);
  }
  SpanCounts c;
  c.gold = g.size();
  c.predicted = p.size();
  for (const auto& k : g) c.tp += p.count(k);
  return c;
}

// Random valid BIO2 sequence over the given types.
inline std::vector<std::string> random_bio2(Rng& rng, std::size_t n, const std::vector<std::string>& types) {
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = rng.below(3);
    if (r == 0 || types.empty()) {
      tags.emplace_back("O");
    } else if (r == 1 || tags.empty() || tags.back() == "O") {
      tags.push_back("B-" + types[rng.below(types.size())]);
    } else {
      tags.push_back("I-" + tags.back().substr(2));
    }
  }
  return tags;
}

// Small random CRF instance: words from a tiny vocabulary, `w` and `bias`
// templates, uniform random weights in [-scale, scale].
struct Instance {
  tagger::CrfModel model;
  corpus::Sentence sentence;
};

inline Instance random_instance(Rng& rng, std::size_t length, std::size_t n_labels, double scale = 1.5) {
  static const char* kLabels[] = {"O", "B-A", "I-A", "B-B", "I-B"};
  static const char* kWords[] = {"alpha", "beta", "gamma", "delta", "eps"};
  std::vector<std::string> labels(kLabels, kLabels + n_labels);
  std::vector<std::pair<std::string, std::string>> attrs = {{"bias", "1"}};
  for (const char* w : kWords) attrs.emplace_back("w", w);
  std::sort(attrs.begin(), attrs.end());
  tagger::CrfModel model(labels, tagger::templates_from_ids(std::vector<std::string>{"bias", "w"}),
                         tagger::FeatureDictionary(attrs));
  for (double& w : model.weights) w = scale * (2.0 * rng.uniform() - 1.0);
  corpus::Sentence s;
  for (std::size_t i = 0; i < length; ++i)
    s.tokens.push_back({kWords[rng.below(std::size(kWords))], labels[rng.below(n_labels)]});
  return {std::move(model), std::move(s)};
}

}  // namespace labelaudit::oracle

#endif  // LABELAUDIT_TESTS_ORACLES_HPP_
