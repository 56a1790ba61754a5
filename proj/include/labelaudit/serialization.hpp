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

// nlohmann::json adapters (found by ADL).

#ifndef LABELAUDIT_SERIALIZATION_HPP_
#define LABELAUDIT_SERIALIZATION_HPP_

#include "json.hpp"
#include "labelaudit/eval.hpp"
#include "labelaudit/protocol.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::tagger {
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
}  // namespace labelaudit::tagger

namespace labelaudit::eval {
void to_json(nlohmann::json& j, const Counts& c);
void from_json(const nlohmann::json& j, Counts& c);
void to_json(nlohmann::json& j, const EvalResult& r);
void from_json(const nlohmann::json& j, EvalResult& r);
}  // namespace labelaudit::eval

namespace labelaudit::protocol {
void to_json(nlohmann::json& j, const IdentifyPlan& p);
void from_json(const nlohmann::json& j, IdentifyPlan& p);
void to_json(nlohmann::json& j, const ValidatePlan& p);
void from_json(const nlohmann::json& j, ValidatePlan& p);
void to_json(nlohmann::json& j, const Curriculum& c);
void from_json(const nlohmann::json& j, Curriculum& c);
void to_json(nlohmann::json& j, const LearningCurve& c);
void from_json(const nlohmann::json& j, LearningCurve& c);
void to_json(nlohmann::json& j, const GapSeries& g);
void from_json(const nlohmann::json& j, GapSeries& g);
void to_json(nlohmann::json& j, const Thresholds& t);
void from_json(const nlohmann::json& j, Thresholds& t);
void to_json(nlohmann::json& j, const AuditReport& r);
void from_json(const nlohmann::json& j, AuditReport& r);
}  // namespace labelaudit::protocol

#endif  // LABELAUDIT_SERIALIZATION_HPP_
