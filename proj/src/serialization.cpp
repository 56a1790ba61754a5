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

#include "labelaudit/serialization.hpp"

namespace labelaudit::tagger {

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"epochs", c.epochs},
       {"learning_rate", c.learning_rate},
       {"l2", c.l2},
       {"adagrad_epsilon", c.adagrad_epsilon},
       {"seed", c.seed},
       {"shuffle", c.shuffle},
       {"full_batch", c.full_batch},
       {"min_count", c.min_count}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  j.at("epochs").get_to(c.epochs);
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("l2").get_to(c.l2);
  j.at("adagrad_epsilon").get_to(c.adagrad_epsilon);
  j.at("seed").get_to(c.seed);
  j.at("shuffle").get_to(c.shuffle);
  j.at("full_batch").get_to(c.full_batch);
  j.at("min_count").get_to(c.min_count);
}

}  // namespace labelaudit::tagger

namespace labelaudit::eval {

void to_json(nlohmann::json& j, const Counts& c) {
  j = {{"tp", c.true_positives}, {"predicted", c.predicted}, {"gold", c.gold}};
}

void from_json(const nlohmann::json& j, Counts& c) {
  j.at("tp").get_to(c.true_positives);
  j.at("predicted").get_to(c.predicted);
  j.at("gold").get_to(c.gold);
}

void to_json(nlohmann::json& j, const EvalResult& r) {
  j = {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}, {"counts", r.micro}};
  auto& per = j["per_type"] = nlohmann::json::object();
  for (const auto& [type, c] : r.per_type) per[type] = c;
}

void from_json(const nlohmann::json& j, EvalResult& r) {
  j.at("precision").get_to(r.precision);
  j.at("recall").get_to(r.recall);
  j.at("f1").get_to(r.f1);
  j.at("counts").get_to(r.micro);
  r.per_type.clear();
  for (const auto& [type, c] : j.at("per_type").items()) r.per_type[type] = c.get<Counts>();
}

}  // namespace labelaudit::eval

namespace labelaudit::protocol {

void to_json(nlohmann::json& j, const IdentifyPlan& p) {
  j = {{"x", p.x},
       {"seed", p.seed},
       {"train_size", p.train_size},
       {"test_size", p.test_size},
       {"new_test", p.new_test},
       {"blue", p.blue},
       {"green", p.green},
       {"external_set", p.external_set}};
}

void from_json(const nlohmann::json& j, IdentifyPlan& p) {
  j.at("x").get_to(p.x);
  j.at("seed").get_to(p.seed);
  j.at("train_size").get_to(p.train_size);
  j.at("test_size").get_to(p.test_size);
  j.at("new_test").get_to(p.new_test);
  j.at("blue").get_to(p.blue);
  j.at("green").get_to(p.green);
  j.at("external_set").get_to(p.external_set);
}

void to_json(nlohmann::json& j, const ValidatePlan& p) {
  j = {{"x", p.x},
       {"y", p.y},
       {"z", p.z},
       {"w", p.w},
       {"seed", p.seed},
       {"train_size", p.train_size},
       {"test_good", p.test_good},
       {"mistake", p.mistake},
       {"correct", p.correct},
       {"train_x", p.train_x},
       {"train_y2", p.train_y2},
       {"train_w", p.train_w}};
}

void from_json(const nlohmann::json& j, ValidatePlan& p) {
  j.at("x").get_to(p.x);
  j.at("y").get_to(p.y);
  j.at("z").get_to(p.z);
  j.at("w").get_to(p.w);
  j.at("seed").get_to(p.seed);
  j.at("train_size").get_to(p.train_size);
  j.at("test_good").get_to(p.test_good);
  j.at("mistake").get_to(p.mistake);
  j.at("correct").get_to(p.correct);
  j.at("train_x").get_to(p.train_x);
  j.at("train_y2").get_to(p.train_y2);
  j.at("train_w").get_to(p.train_w);
}

void to_json(nlohmann::json& j, const Curriculum& c) {
  j = {{"name", c.name}, {"seed_key", c.seed_key}};
  auto& segs = j["segments"] = nlohmann::json::array();
  for (const auto& s : c.segments)
    segs.push_back({{"label", s.label}, {"source", to_string(s.source)}, {"indices", s.indices}});
}

void from_json(const nlohmann::json& j, Curriculum& c) {
  j.at("name").get_to(c.name);
  j.at("seed_key").get_to(c.seed_key);
  c.segments.clear();
  for (const auto& s : j.at("segments")) {
    c.segments.push_back({s.at("label").get<std::string>(),
                          source_from_string(s.at("source").get<std::string>()),
                          s.at("indices").get<std::vector<std::size_t>>()});
  }
}

void to_json(nlohmann::json& j, const LearningCurve& c) {
  j = {{"arm", c.arm}, {"seed", c.seed}};
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : c.points) pts.push_back({{"prefix", p.prefix}, {"eval", p.eval}});
}

void from_json(const nlohmann::json& j, LearningCurve& c) {
  j.at("arm").get_to(c.arm);
  j.at("seed").get_to(c.seed);
  c.points.clear();
  for (const auto& p : j.at("points"))
    c.points.push_back({p.at("prefix").get<std::size_t>(), p.at("eval").get<eval::EvalResult>()});
}

void to_json(nlohmann::json& j, const GapSeries& g) {
  j = {{"name", g.name}, {"family", g.family}, {"minuend", g.minuend}, {"subtrahend", g.subtrahend}};
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : g.points) {
    pts.push_back({{"prefix", p.prefix},
                   {"per_seed", p.per_seed},
                   {"mean", p.mean},
                   {"min", p.min},
                   {"max", p.max},
                   {"sd", p.sd},
                   {"band", p.band}});
  }
}

void from_json(const nlohmann::json& j, GapSeries& g) {
  j.at("name").get_to(g.name);
  j.at("family").get_to(g.family);
  j.at("minuend").get_to(g.minuend);
  j.at("subtrahend").get_to(g.subtrahend);
  g.points.clear();
  for (const auto& p : j.at("points")) {
    GapPoint pt;
    p.at("prefix").get_to(pt.prefix);
    p.at("per_seed").get_to(pt.per_seed);
    p.at("mean").get_to(pt.mean);
    p.at("min").get_to(pt.min);
    p.at("max").get_to(pt.max);
    p.at("sd").get_to(pt.sd);
    p.at("band").get_to(pt.band);
    g.points.push_back(std::move(pt));
  }
}

void to_json(nlohmann::json& j, const Thresholds& t) {
  j = {{"threshold", t.threshold}, {"early_window", t.early_window}};
}

void from_json(const nlohmann::json& j, Thresholds& t) {
  j.at("threshold").get_to(t.threshold);
  j.at("early_window").get_to(t.early_window);
}

void to_json(nlohmann::json& j, const AuditReport& r) {
  j = nlohmann::json::object();
  j["protocol"] = r.protocol;
  j["seeds"] = r.seeds;
  j["thresholds"] = r.thresholds;
  j["verdict"] = r.verdict;
  j["rule"] = r.rule;
  j["early_window_mean_gap"] = r.early_window_mean_gap;
  if (r.train_test_slopes)
    j["train_test_slopes"] = {{"clean", r.train_test_slopes->clean},
                              {"corrupted", r.train_test_slopes->corrupted}};
  j["warnings"] = r.warnings;
  j["gaps"] = r.gaps;
  j["curves"] = r.curves;
  auto& plans = j["plans"] = nlohmann::json::array();
  for (const auto& p : r.identify_plans) plans.push_back(p);
  for (const auto& p : r.validate_plans) plans.push_back(p);
  j["curricula"] = r.curricula;
  j["run_config"] = r.run_config;
}

void from_json(const nlohmann::json& j, AuditReport& r) {
  j.at("protocol").get_to(r.protocol);
  j.at("seeds").get_to(r.seeds);
  j.at("thresholds").get_to(r.thresholds);
  j.at("verdict").get_to(r.verdict);
  j.at("rule").get_to(r.rule);
  j.at("early_window_mean_gap").get_to(r.early_window_mean_gap);
  r.train_test_slopes.reset();
  if (j.contains("train_test_slopes")) {
    const auto& s = j.at("train_test_slopes");
    r.train_test_slopes = SegmentSlopes{s.at("clean").get<double>(), s.at("corrupted").get<double>()};
  }
  j.at("warnings").get_to(r.warnings);
  j.at("gaps").get_to(r.gaps);
  j.at("curves").get_to(r.curves);
  r.identify_plans.clear();
  r.validate_plans.clear();
  for (const auto& p : j.at("plans")) {
    if (r.protocol == "identify") {
      r.identify_plans.push_back(p.get<IdentifyPlan>());
    } else {
      r.validate_plans.push_back(p.get<ValidatePlan>());
    }
  }
  j.at("curricula").get_to(r.curricula);
  r.run_config = j.at("run_config");
}

}  // namespace labelaudit::protocol
