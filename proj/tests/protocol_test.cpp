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
#include <atomic>
#include <set>

#include "doctest.h"
#include "labelaudit/errors.hpp"
#include "labelaudit/protocol.hpp"

using namespace labelaudit;
using namespace labelaudit::protocol;
using corpus::Dataset;
using corpus::Sentence;

namespace {

Dataset filler(std::size_t n, const std::string& word = "w") {
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(Sentence{{{word + std::to_string(i), "O"}, {"x", "B-A"}}, {}});
  return Dataset(std::move(out));
}

template <typename... V>
bool disjoint(const V&... vs) {
  std::set<std::size_t> all;
  std::size_t total = 0;
  ((all.insert(vs.begin(), vs.end()), total += vs.size()), ...);
  return all.size() == total;
}

AuditSettings small_settings() {
  AuditSettings s;
  s.seeds = {1, 2};
  s.checkpoints.count = 3;
  s.curve.train.epochs = 2;
  return s;
}

}  // namespace

TEST_CASE("identify plan on a 1861 / 551 split") {
  const Dataset train = filler(1861), test = filler(551, "t");
  std::vector<std::string> warnings;
  const auto plan = make_identify_plan(train, test, 550, 7, &warnings);
  CHECK(warnings.empty());
  CHECK(plan.new_test.size() == 550);
  CHECK(plan.blue.size() == 550);
  CHECK(plan.green.size() == 550);
  CHECK(disjoint(plan.new_test, plan.blue, plan.green));
  CHECK(train.size() - 3 * 550 == 211);
  auto external = plan.external_set;
  std::ranges::sort(external);
  for (std::size_t i = 0; i < external.size(); ++i) CHECK(external[i] == i);
  CHECK(external.size() == 551);

  const auto curricula = build_identify_curricula(plan);
  REQUIRE(curricula.size() == 3);
  CHECK(curricula[0].name == "TrainTest");
  CHECK(curricula[1].name == "PureTrain");
  CHECK(curricula[2].name == "TestTrain");
  CHECK(curricula[0].size() == 1101);
  CHECK(curricula[1].size() == 1100);
  CHECK(curricula[2].size() == 1101);
  CHECK(curricula[0].segments[0].indices == plan.blue);
  CHECK(curricula[1].segments[0].indices == plan.green);
  CHECK(curricula[1].segments[1].indices == plan.blue);
  CHECK(curricula[2].segments[0].source == Source::kTest);

  // The new test set never appears in any curriculum.
  for (const auto& c : curricula)
    for (const auto& seg : c.segments)
      if (seg.source == Source::kTrain) CHECK(disjoint(seg.indices, plan.new_test));

  CHECK(make_identify_plan(train, test, 550, 7) == plan);
  CHECK(make_identify_plan(train, test, 550, 8) != plan);

  // Materialized order follows segment order.
  const Sources sources{&train, &test};
  const Dataset m = curricula[2].materialize(sources);
  CHECK(m[0] == test[plan.external_set[0]]);
  CHECK(m[551] == train[plan.blue[0]]);
}

TEST_CASE("identify plan errors and warnings") {
  const Dataset train = filler(30), test = filler(5, "t");
  try {
    make_identify_plan(train, test, 11, 1);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("largest feasible x is 10") != std::string::npos);
  }
  std::vector<std::string> warnings;
  make_identify_plan(train, test, 10, 1, &warnings);
  CHECK(warnings.size() == 1);
  CHECK_THROWS_AS(make_identify_plan(train, test, 0, 1), ConfigError);
}

TEST_CASE("validate plan sizes and exclusivity") {
  const Dataset train = filler(3453), good = filler(1355, "g"), mistake = filler(186, "m");
  const auto plan = make_validate_plan(train, good, mistake, mistake, 1541, 1355, 186, 400, 3);
  CHECK(plan.train_x.size() == 1541);
  CHECK(plan.train_y2.size() == 1355);
  CHECK(plan.train_w.size() == 400);
  CHECK(disjoint(plan.train_x, plan.train_y2, plan.train_w));
  CHECK(plan.mistake == plan.correct);
  CHECK(plan.test_good.size() == 1355);

  const auto curricula = build_validate_curricula(plan);
  const std::vector<std::string> names = {"TestTrainMistake", "TestTrainCorrect", "PureTrainMistake",
                                          "PureTrainCorrect", "MistakeTestTrain", "CorrectTestTrain",
                                          "MistakePureTrain", "CorrectPureTrain"};
  REQUIRE(curricula.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(curricula[i].name == names[i]);
    CHECK(curricula[i].size() == 1355 + 400 + 186);
  }
  // Mistake/Correct pairs differ only in the corrected segment.
  for (std::size_t i = 0; i < 8; i += 2) {
    CHECK(curricula[i].seed_key == curricula[i + 1].seed_key);
    for (std::size_t s = 0; s < 3; ++s) {
      const auto& a = curricula[i].segments[s];
      const auto& b = curricula[i + 1].segments[s];
      if (a.source == Source::kTestMistake) {
        CHECK(b.source == Source::kTestCorrected);
      } else {
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("validate plan errors") {
  const Dataset train = filler(20), good = filler(5, "g"), mistake = filler(2, "m");
  CHECK_THROWS_AS(make_validate_plan(train, good, mistake, mistake, 10, 5, 2, 6, 1), ConfigError);
  CHECK_THROWS_AS(make_validate_plan(train, good, mistake, mistake, 5, 4, 2, 1, 1), DataError);
  CHECK_THROWS_AS(make_validate_plan(train, good, mistake, filler(3, "m"), 5, 5, 2, 1, 1), DataError);
  try {
    make_validate_plan(train, good, mistake, filler(2, "q"), 5, 5, 2, 1, 1);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("sentence 0") != std::string::npos);
  }
}

TEST_CASE("checkpoint contract") {
  CHECK(checkpoint_grid(100, 4) == std::vector<std::size_t>{25, 50, 75, 100});
  CHECK(checkpoint_grid(3, 10) == std::vector<std::size_t>{1, 2, 3});
  CheckpointSpec spec;
  spec.sizes = {10, 50, 5000};
  CHECK(spec.resolve(1100, 1101) == std::vector<std::size_t>{10, 50, 1101});
  spec.sizes.clear();
  spec.count = 2;
  CHECK(spec.resolve(1100, 1101) == std::vector<std::size_t>{550, 1100, 1101});
  CHECK(spec.resolve(1100, 1100) == std::vector<std::size_t>{550, 1100});
}

TEST_CASE("run_curve validates checkpoints") {
  const Dataset train = filler(12);
  const Curriculum c{"arm", "arm", {{"all", Source::kTrain, {0, 1, 2, 3}}}};
  const Sources sources{&train};
  CurveOptions options;
  options.train.epochs = 1;
  const std::vector<std::size_t> bad = {2, 2, 4};
  CHECK_THROWS_AS(run_curve(c, sources, train, bad, options), ConfigError);
  const std::vector<std::size_t> short_of_end = {2, 3};
  CHECK_THROWS_AS(run_curve(c, sources, train, short_of_end, options), ConfigError);
  const std::vector<std::size_t> ok = {2, 4};
  const auto curve = run_curve(c, sources, train, ok, options);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[1].prefix == 4);
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 3 || i == 7) throw DataError("fail " + std::to_string(i));
    });
    FAIL("expected a failure");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "fail 3");
  }
}

TEST_CASE("gap statistics against a hand computation") {
  auto curve = [](std::string arm, std::uint64_t seed, double f1) {
    LearningCurve c{std::move(arm), seed, {}};
    CurvePoint p;
    p.prefix = 10;
    p.eval.f1 = f1;
    c.points.push_back(p);
    return c;
  };
  const std::vector<LearningCurve> curves = {curve("A", 1, 0.8), curve("B", 1, 0.7), curve("A", 2, 0.9),
                                             curve("B", 2, 0.6)};
  const std::vector<std::uint64_t> seeds = {1, 2};
  const auto g = compute_gap(curves, seeds, "A", "B", 0.02);
  REQUIRE(g.points.size() == 1);
  const auto& p = g.points[0];
  CHECK(p.mean == doctest::Approx(0.2));
  CHECK(p.min == doctest::Approx(0.1));
  CHECK(p.max == doctest::Approx(0.3));
  CHECK(p.sd == doctest::Approx(std::sqrt(0.02)));
  CHECK(p.band == doctest::Approx(2 * std::sqrt(0.02)));
  CHECK_THROWS_AS(compute_gap(curves, seeds, "A", "C", 0.02), DataError);
}

TEST_CASE("identify verdict rules") {
  auto series = [](std::string family, std::vector<std::vector<double>> per_checkpoint) {
    GapSeries g;
    g.family = std::move(family);
    for (std::size_t i = 0; i < per_checkpoint.size(); ++i) {
      GapPoint p;
      p.prefix = 10 * (i + 1);
      p.per_seed = per_checkpoint[i];
      double sum = 0;
      for (double v : p.per_seed) sum += v;
      p.mean = sum / static_cast<double>(p.per_seed.size());
      p.min = *std::ranges::min_element(p.per_seed);
      g.points.push_back(p);
    }
    return g;
  };
  Thresholds t{0.02, 2};
  std::vector<GapSeries> gaps = {series("primary", {{0.1, 0.05}, {0.08, 0.03}, {0.0, 0.0}}),
                                 series("pair", {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}})};
  CHECK(identify_verdict(gaps, t) == "inconsistent");
  gaps[0] = series("primary", {{0.1, -0.01}, {0.08, 0.03}, {0.0, 0.0}});
  CHECK(identify_verdict(gaps, t) == "indeterminate");
  gaps[0] = series("primary", {{0.01, -0.01}, {0.005, 0.0}, {0.5, 0.5}});
  CHECK(identify_verdict(gaps, t) == "consistent");
  gaps[1] = series("pair", {{0.03, 0.03}, {0.0, 0.0}, {0.0, 0.0}});
  CHECK(identify_verdict(gaps, t) == "indeterminate");
}

TEST_CASE("validate verdict rules") {
  auto point = [](double mean, double band) {
    GapPoint p;
    p.prefix = 1;
    p.mean = mean;
    p.band = band;
    return p;
  };
  Thresholds t{0.02, 0};
  std::vector<GapSeries> gaps = {{"m", "mistake", "C", "M", {point(0.05, 0.02)}},
                                 {"a", "analogue", "C", "P", {point(0.01, 0.02)}}};
  CHECK(validate_verdict(gaps, t, 5) == "recovered");
  gaps[0].points[0].mean = 0.01;
  CHECK(validate_verdict(gaps, t, 5) == "indeterminate");
  gaps[1].points[0].mean = -0.03;
  CHECK(validate_verdict(gaps, t, 5) == "not-recovered");
  CHECK(validate_verdict(gaps, t, 0) == "recovered");
}

TEST_CASE("identify run is deterministic across job counts and reproduces its verdict") {
  const Dataset train = corpus::synthesize_corpus(90, 120, {"A", "B"}, 1);
  const Dataset test = corpus::synthesize_corpus(30, 120, {"A", "B"}, 2);
  auto settings = small_settings();
  const auto a = run_identify(train, test, 30, settings);
  settings.jobs = 4;
  const auto b = run_identify(train, test, 30, settings);
  CHECK(a == b);
  CHECK(a.curves.size() == 6);
  CHECK(a.identify_plans.size() == 2);
  CHECK(a.gaps == identify_gaps(a.curves, a.seeds, a.thresholds.threshold));
  CHECK(a.verdict == identify_verdict(a.gaps, a.thresholds));
  for (const auto& c : a.curves) CHECK(c.points.back().prefix == 60);

  settings.curve.continual = true;
  const auto c1 = run_identify(train, test, 30, settings);
  settings.jobs = 1;
  CHECK(run_identify(train, test, 30, settings) == c1);
}

TEST_CASE("validate with z = 0 gives identical Mistake and Correct curves") {
  const Dataset train = corpus::synthesize_corpus(80, 120, {"A", "B"}, 3);
  const Dataset good = corpus::synthesize_corpus(20, 120, {"A", "B"}, 4);
  const Dataset none;
  auto settings = small_settings();
  const auto r = run_validate(train, good, none, none, 20, 20, 0, 10, settings);
  CHECK(r.curves.size() == 16);
  for (std::size_t i = 0; i < r.curves.size(); i += 2) CHECK(r.curves[i].points == r.curves[i + 1].points);
  for (const auto& g : r.gaps) {
    if (g.family != "mistake") continue;
    for (const auto& p : g.points) CHECK(p.mean == 0.0);
  }
  CHECK(r.verdict == "recovered");
  CHECK(r.verdict == validate_verdict(r.gaps, r.thresholds, 0));
}
