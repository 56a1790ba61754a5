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

// Span-exact precision / recall / F1, conlleval style.

#ifndef LABELAUDIT_EVAL_HPP_
#define LABELAUDIT_EVAL_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "labelaudit/corpus.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::eval {

struct Counts {
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  // 0/0 is reported as 0 for all three scores.
  double precision() const;
  double recall() const;
  double f1() const;

  friend bool operator==(const Counts&, const Counts&) = default;
};

struct EvalResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Counts micro;
  std::map<std::string, Counts> per_type;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

using LabelSequences = std::vector<std::vector<std::string>>;

// Throws DataError naming the sentence on a count or length mismatch.
EvalResult evaluate(const LabelSequences& gold, const LabelSequences& predicted);

EvalResult evaluate_model(const tagger::CrfModel& model, const corpus::Dataset& test);

// conlleval-like text table, percentages with two decimals.
std::string format_report(const EvalResult& result);

// "P R F1" row: three percentages with two decimals.
std::string format_prf_row(const EvalResult& result);

}  // namespace labelaudit::eval

#endif  // LABELAUDIT_EVAL_HPP_
