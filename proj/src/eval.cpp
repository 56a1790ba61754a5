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

#include "labelaudit/eval.hpp"

#include <cstdio>

#include "labelaudit/errors.hpp"

namespace labelaudit::eval {

double Counts::precision() const {
  return predicted == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(predicted);
}

double Counts::recall() const {
  return gold == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(gold);
}

double Counts::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalResult evaluate(const LabelSequences& gold, const LabelSequences& predicted) {
  if (gold.size() != predicted.size())
    throw DataError("evaluate: " + std::to_string(gold.size()) + " gold sentences but " +
                    std::to_string(predicted.size()) + " predicted");
  EvalResult r;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size())
      throw DataError("evaluate: sentence " + std::to_string(s) + " has " +
                      std::to_string(gold[s].size()) + " gold tags but " +
                      std::to_string(predicted[s].size()) + " predicted");
    std::vector<corpus::Span> g, p;
    try {
      g = corpus::extract_spans(gold[s]);
      p = corpus::extract_spans(predicted[s]);
    } catch (const TagError& e) {
      throw DataError("evaluate: sentence " + std::to_string(s) + ": " + e.what());
    }
    // Both lists are sorted and disjoint; merge on (start, end, type).
    std::size_t i = 0, j = 0;
    while (i < g.size() && j < p.size()) {
      if (g[i] == p[j]) {
        ++r.per_type[g[i].entity_type].true_positives;
        ++i;
        ++j;
      } else if (g[i] < p[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    for (const auto& span : g) ++r.per_type[span.entity_type].gold;
    for (const auto& span : p) ++r.per_type[span.entity_type].predicted;
  }
  for (const auto& [type, c] : r.per_type) {
    r.micro.true_positives += c.true_positives;
    r.micro.predicted += c.predicted;
    r.micro.gold += c.gold;
  }
  r.precision = r.micro.precision();
  r.recall = r.micro.recall();
  r.f1 = r.micro.f1();
  return r;
}

EvalResult evaluate_model(const tagger::CrfModel& model, const corpus::Dataset& test) {
  LabelSequences gold;
  gold.reserve(test.size());
  for (const auto& s : test.sentences()) gold.push_back(s.labels());
  return evaluate(gold, tagger::predict(model, test.sentences()));
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

std::string row(const std::string& name, const Counts& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %7s %7s %7s %8zu %8zu %8zu\n", name.c_str(),
                pct(c.precision()).c_str(), pct(c.recall()).c_str(), pct(c.f1()).c_str(),
                c.true_positives, c.predicted, c.gold);
  return buf;
}

}  // namespace

std::string format_report(const EvalResult& result) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %7s %7s %7s %8s %8s %8s\n", "type", "P", "R", "F1", "tp",
                "pred", "gold");
  out += buf;
  for (const auto& [type, c] : result.per_type) out += row(type, c);
  out += row("overall", result.micro);
  return out;
}

std::string format_prf_row(const EvalResult& result) {
  return pct(result.precision) + " " + pct(result.recall) + " " + pct(result.f1);
}

}  // namespace labelaudit::eval
