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

#include "labelaudit/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <thread>

#include "labelaudit/errors.hpp"
#include "labelaudit/rng.hpp"

namespace labelaudit::protocol {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::kTrain: return "train";
    case Source::kTest: return "test";
    case Source::kTestGood: return "test_good";
    case Source::kTestMistake: return "test_mistake";
    case Source::kTestCorrected: return "test_corrected";
  }
  return "?";
}

Source source_from_string(std::string_view name) {
  for (Source s : {Source::kTrain, Source::kTest, Source::kTestGood, Source::kTestMistake,
                   Source::kTestCorrected}) {
    if (to_string(s) == name) return s;
  }
  throw DataError("unknown curriculum source '" + std::string(name) + "'");
}

const Dataset& Sources::get(Source source) const {
  const Dataset* d = nullptr;
  switch (source) {
    case Source::kTrain: d = train; break;
    case Source::kTest: d = test; break;
    case Source::kTestGood: d = test_good; break;
    case Source::kTestMistake: d = test_mistake; break;
    case Source::kTestCorrected: d = test_corrected; break;
  }
  if (!d) throw ConfigError("curriculum source '" + std::string(to_string(source)) + "' is not bound");
  return *d;
}

std::size_t Curriculum::size() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.indices.size();
  return n;
}

Dataset Curriculum::materialize(const Sources& sources) const {
  std::vector<corpus::Sentence> out;
  out.reserve(size());
  for (const auto& seg : segments) {
    const Dataset& d = sources.get(seg.source);
    for (std::size_t i : seg.indices) out.push_back(d.sentences().at(i));
  }
  return Dataset(std::move(out), name);
}

namespace {

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& v, std::size_t from, std::size_t n) {
  return {v.begin() + static_cast<std::ptrdiff_t>(from),
          v.begin() + static_cast<std::ptrdiff_t>(from + n)};
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed, std::string_view salt) {
  auto idx = iota_n(n);
  Rng rng(derive_seed(seed, hash_name(salt)));
  rng.shuffle(std::span(idx));
  return idx;
}

}  // namespace

IdentifyPlan make_identify_plan(const Dataset& train, const Dataset& test, std::size_t x,
                                std::uint64_t seed, std::vector<std::string>* warnings) {
  if (x == 0) throw ConfigError("identify: x must be positive");
  if (3 * x > train.size())
    throw ConfigError("identify: 3x = " + std::to_string(3 * x) + " exceeds the training set (" +
                      std::to_string(train.size()) + " sentences); largest feasible x is " +
                      std::to_string(train.size() / 3));
  if (x > test.size() && warnings)
    warnings->push_back("identify: x = " + std::to_string(x) + " exceeds the test set size " +
                        std::to_string(test.size()));
  IdentifyPlan plan;
  plan.x = x;
  plan.seed = seed;
  plan.train_size = train.size();
  plan.test_size = test.size();
  const auto perm = shuffled_indices(train.size(), seed, "identify-plan");
  plan.new_test = slice(perm, 0, x);
  plan.blue = slice(perm, x, x);
  plan.green = slice(perm, 2 * x, x);
  plan.external_set = shuffled_indices(test.size(), seed, "identify-test-order");
  return plan;
}

std::vector<Curriculum> build_identify_curricula(const IdentifyPlan& plan) {
  const Segment blue{"blue", Source::kTrain, plan.blue};
  const Segment green{"green", Source::kTrain, plan.green};
  const Segment test{"test", Source::kTest, plan.external_set};
  return {
      {"TrainTest", "identify", {blue, test}},
      {"PureTrain", "identify", {green, blue}},
      {"TestTrain", "identify", {test, blue}},
  };
}

ValidatePlan make_validate_plan(const Dataset& train, const Dataset& test_good,
                                const Dataset& test_mistake, const Dataset& test_corrected,
                                std::size_t x, std::size_t y, std::size_t z, std::size_t w,
                                std::uint64_t seed) {
  if (x == 0) throw ConfigError("validate: x must be positive");
  if (test_good.size() != y)
    throw DataError("validate: test_good has " + std::to_string(test_good.size()) +
                    " sentences, expected y = " + std::to_string(y));
  if (test_mistake.size() != z)
    throw DataError("validate: test_mistake has " + std::to_string(test_mistake.size()) +
                    " sentences, expected z = " + std::to_string(z));
  if (test_corrected.size() != z)
    throw DataError("validate: test_corrected has " + std::to_string(test_corrected.size()) +
                    " sentences, expected z = " + std::to_string(z));
  for (std::size_t i = 0; i < z; ++i) {
    const auto& a = test_mistake[i].tokens;
    const auto& b = test_corrected[i].tokens;
    const bool same = a.size() == b.size() &&
                      std::equal(a.begin(), a.end(), b.begin(),
                                 [](const auto& p, const auto& q) { return p.text == q.text; });
    if (!same)
      throw DataError("validate: test_mistake and test_corrected differ in tokens at sentence " +
                      std::to_string(i));
  }
  if (x + y + w > train.size())
    throw ConfigError("validate: x + y + w = " + std::to_string(x + y + w) +
                      " exceeds the training set (" + std::to_string(train.size()) + " sentences)");
  ValidatePlan plan;
  plan.x = x;
  plan.y = y;
  plan.z = z;
  plan.w = w;
  plan.seed = seed;
  plan.train_size = train.size();
  plan.test_good = shuffled_indices(y, seed, "validate-test-order");
  // Mistake and Correct share one order so position i holds the same sentence.
  plan.mistake = shuffled_indices(z, seed, "validate-correction-order");
  plan.correct = plan.mistake;
  const auto perm = shuffled_indices(train.size(), seed, "validate-plan");
  plan.train_x = slice(perm, 0, x);
  plan.train_y2 = slice(perm, x, y);
  plan.train_w = slice(perm, x + y, w);
  return plan;
}

std::vector<Curriculum> build_validate_curricula(const ValidatePlan& plan) {
  const Segment test{"test", Source::kTestGood, plan.test_good};
  const Segment train_y2{"train_y", Source::kTrain, plan.train_y2};
  const Segment train_w{"train_w", Source::kTrain, plan.train_w};
  const Segment mistake{"mistake", Source::kTestMistake, plan.mistake};
  const Segment correct{"correct", Source::kTestCorrected, plan.correct};
  return {
      {"TestTrainMistake", "validate", {test, train_w, mistake}},
      {"TestTrainCorrect", "validate", {test, train_w, correct}},
      {"PureTrainMistake", "validate", {train_y2, train_w, mistake}},
      {"PureTrainCorrect", "validate", {train_y2, train_w, correct}},
      {"MistakeTestTrain", "validate", {mistake, test, train_w}},
      {"CorrectTestTrain", "validate", {correct, test, train_w}},
      {"MistakePureTrain", "validate", {mistake, train_y2, train_w}},
      {"CorrectPureTrain", "validate", {correct, train_y2, train_w}},
  };
}

std::vector<std::size_t> checkpoint_grid(std::size_t n, std::size_t count) {
  std::vector<std::size_t> out;
  if (n == 0 || count == 0) return out;
  for (std::size_t i = 1; i <= count; ++i) {
    const auto k = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(n) / static_cast<double>(count)));
    if (k > 0 && (out.empty() || k > out.back())) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> CheckpointSpec::resolve(std::size_t common_size, std::size_t arm_size) const {
  std::vector<std::size_t> out;
  if (sizes.empty()) {
    out = checkpoint_grid(std::min(common_size, arm_size), count);
  } else {
    for (std::size_t k : sizes) {
      if (k > 0 && k <= arm_size && (out.empty() || k > out.back())) out.push_back(k);
    }
  }
  if (arm_size > 0 && (out.empty() || out.back() != arm_size)) out.push_back(arm_size);
  return out;
}

std::uint64_t checkpoint_seed(std::uint64_t seed, std::string_view seed_key, std::size_t index) {
  return derive_seed(seed, seed_key, index);
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < std::min(jobs, n); ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::set<std::string> union_alphabet(std::initializer_list<const Dataset*> datasets) {
  std::set<std::string> types;
  for (const Dataset* d : datasets) {
    if (d) types.insert(d->label_alphabet().begin(), d->label_alphabet().end());
  }
  return types;
}

Dataset prefix_of(const Dataset& d, std::size_t k) {
  return Dataset({d.sentences().begin(), d.sentences().begin() + static_cast<std::ptrdiff_t>(k)},
                 d.name());
}

eval::EvalResult train_and_evaluate(const Dataset& data, const Dataset& new_test,
                                    const CurveOptions& options, std::uint64_t seed) {
  tagger::TrainConfig config = options.train;
  config.seed = seed;
  tagger::TrainOptions topts;
  if (!options.entity_types.empty()) topts.entity_types = options.entity_types;
  const auto model = tagger::train(data, options.templates, config, topts);
  return eval::evaluate_model(model, new_test);
}

void check_checkpoints(std::span<const std::size_t> checkpoints, std::size_t size,
                       const std::string& arm) {
  if (checkpoints.empty()) throw ConfigError(arm + ": no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1]))
      throw ConfigError(arm + ": checkpoints must be positive and strictly increasing");
  }
  if (checkpoints.back() > size)
    throw ConfigError(arm + ": checkpoint " + std::to_string(checkpoints.back()) +
                      " exceeds the curriculum size " + std::to_string(size));
  if (checkpoints.back() != size)
    throw ConfigError(arm + ": last checkpoint must equal the curriculum size " +
                      std::to_string(size));
}

// Continual mode: one dictionary over the whole curriculum, one trainer
// carried across checkpoints, each step fed only the newly added sentences.
LearningCurve continual_curve(const Curriculum& curriculum, const Dataset& data,
                              const Dataset& new_test, std::span<const std::size_t> checkpoints,
                              const CurveOptions& options) {
  tagger::TrainConfig config = options.train;
  config.seed = checkpoint_seed(options.train.seed, curriculum.seed_key, 0);
  const auto types = options.entity_types.empty() ? data.label_alphabet() : options.entity_types;
  tagger::Trainer trainer(tagger::CrfModel(tagger::label_set(types), options.templates,
                                           tagger::build_features(data, options.templates,
                                                                  config.min_count),
                                           config));
  LearningCurve curve{curriculum.name, options.train.seed, {}};
  std::size_t fed = 0;
  for (std::size_t k : checkpoints) {
    std::vector<tagger::EncodedSentence> chunk;
    for (std::size_t i = fed; i < k; ++i) chunk.push_back(tagger::encode(trainer.model(), data[i], true));
    trainer.fit(chunk);
    fed = k;
    curve.points.push_back({k, eval::evaluate_model(trainer.model(), new_test)});
  }
  return curve;
}

}  // namespace

LearningCurve run_curve(const Curriculum& curriculum, const Sources& sources, const Dataset& new_test,
                        std::span<const std::size_t> checkpoints, const CurveOptions& options,
                        std::size_t jobs) {
  options.train.validate();
  check_checkpoints(checkpoints, curriculum.size(), curriculum.name);
  const Dataset data = curriculum.materialize(sources);
  if (options.continual) return continual_curve(curriculum, data, new_test, checkpoints, options);

  LearningCurve curve{curriculum.name, options.train.seed, {}};
  curve.points.resize(checkpoints.size());
  parallel_for(checkpoints.size(), jobs, [&](std::size_t i) {
    const std::size_t k = checkpoints[i];
    curve.points[i] = {k, train_and_evaluate(prefix_of(data, k), new_test, options,
                                             checkpoint_seed(options.train.seed,
                                                             curriculum.seed_key, i))};
  });
  return curve;
}

GapSeries compute_gap(std::span<const LearningCurve> curves, std::span<const std::uint64_t> seeds,
                      const std::string& minuend, const std::string& subtrahend, double threshold,
                      std::string family) {
  auto find = [&](const std::string& arm, std::uint64_t seed) -> const LearningCurve& {
    for (const auto& c : curves) {
      if (c.arm == arm && c.seed == seed) return c;
    }
    throw DataError("no curve for arm '" + arm + "' and seed " + std::to_string(seed));
  };

  GapSeries g{minuend + "-" + subtrahend, std::move(family), minuend, subtrahend, {}};
  if (seeds.empty()) return g;
  // Checkpoints shared by both arms in every seed.
  std::vector<std::size_t> common;
  for (const auto& p : find(minuend, seeds[0]).points) common.push_back(p.prefix);
  for (std::uint64_t s : seeds) {
    for (const auto* arm : {&minuend, &subtrahend}) {
      std::vector<std::size_t> mine;
      for (const auto& p : find(*arm, s).points) mine.push_back(p.prefix);
      std::vector<std::size_t> kept;
      std::ranges::set_intersection(common, mine, std::back_inserter(kept));
      common = std::move(kept);
    }
  }
  auto f1_at = [](const LearningCurve& c, std::size_t k) {
    for (const auto& p : c.points) {
      if (p.prefix == k) return p.eval.f1;
    }
    return 0.0;
  };
  for (std::size_t k : common) {
    GapPoint pt;
    pt.prefix = k;
    for (std::uint64_t s : seeds)
      pt.per_seed.push_back(f1_at(find(minuend, s), k) - f1_at(find(subtrahend, s), k));
    const double n = static_cast<double>(pt.per_seed.size());
    pt.mean = std::accumulate(pt.per_seed.begin(), pt.per_seed.end(), 0.0) / n;
    pt.min = *std::ranges::min_element(pt.per_seed);
    pt.max = *std::ranges::max_element(pt.per_seed);
    double ss = 0.0;
    for (double v : pt.per_seed) ss += (v - pt.mean) * (v - pt.mean);
    pt.sd = pt.per_seed.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    pt.band = std::max(threshold, 2.0 * pt.sd);
    g.points.push_back(std::move(pt));
  }
  return g;
}

std::vector<GapSeries> identify_gaps(std::span<const LearningCurve> curves,
                                     std::span<const std::uint64_t> seeds, double threshold) {
  return {
      compute_gap(curves, seeds, "PureTrain", "TestTrain", threshold, "primary"),
      compute_gap(curves, seeds, "PureTrain", "TrainTest", threshold, "pair"),
      compute_gap(curves, seeds, "TrainTest", "TestTrain", threshold, "pair"),
  };
}

std::vector<GapSeries> validate_gaps(std::span<const LearningCurve> curves,
                                     std::span<const std::uint64_t> seeds, double threshold) {
  std::vector<GapSeries> gaps;
  for (const char* ord : {"TestTrain%", "PureTrain%", "%TestTrain", "%PureTrain"}) {
    std::string correct(ord), mistake(ord);
    correct.replace(correct.find('%'), 1, "Correct");
    mistake.replace(mistake.find('%'), 1, "Mistake");
    gaps.push_back(compute_gap(curves, seeds, correct, mistake, threshold, "mistake"));
  }
  gaps.push_back(compute_gap(curves, seeds, "TestTrainCorrect", "PureTrainCorrect", threshold, "analogue"));
  gaps.push_back(compute_gap(curves, seeds, "CorrectTestTrain", "CorrectPureTrain", threshold, "analogue"));
  return gaps;
}

namespace {

std::size_t window_size(const Thresholds& t, std::size_t n_points) {
  const std::size_t w = t.early_window == 0 ? std::max<std::size_t>(1, n_points / 2) : t.early_window;
  return std::min(w, n_points);
}

}  // namespace

namespace {

std::string compact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string identify_rule(const Thresholds& t) {
  return "inconsistent iff for each of the first " + std::to_string(t.early_window) +
         " checkpoints mean(F1 PureTrain - F1 TestTrain) > " + compact(t.threshold) +
         " and min over seeds > 0; consistent iff every arm-pair |mean gap| < " +
         compact(t.threshold) + " over the same window; otherwise indeterminate";
}

std::string validate_rule(const Thresholds& t) {
  return "recovered iff every ordering's final mean(F1 Correct - F1 Mistake) > " +
         compact(t.threshold) +
         " and every Correct variant's mean gap to its PureTrain analogue lies within the noise "
         "band max(" + compact(t.threshold) +
         ", 2 sd) at every checkpoint; not-recovered if a Correct variant leaves that band; "
         "otherwise indeterminate";
}

std::string identify_verdict(std::span<const GapSeries> gaps, const Thresholds& t) {
  const GapSeries* primary = nullptr;
  for (const auto& g : gaps) {
    if (g.family == "primary") primary = &g;
  }
  if (!primary || primary->points.empty()) return "indeterminate";
  const std::size_t window = window_size(t, primary->points.size());

  bool inconsistent = true;
  for (std::size_t i = 0; i < window; ++i) {
    const auto& p = primary->points[i];
    if (!(p.mean > t.threshold && p.min > 0.0)) inconsistent = false;
  }
  if (inconsistent) return "inconsistent";

  bool consistent = true;
  for (const auto& g : gaps) {
    for (std::size_t i = 0; i < std::min(window, g.points.size()); ++i) {
      if (!(std::abs(g.points[i].mean) < t.threshold)) consistent = false;
    }
  }
  return consistent ? "consistent" : "indeterminate";
}

std::string validate_verdict(std::span<const GapSeries> gaps, const Thresholds& t, std::size_t z) {
  if (z == 0) return "recovered";
  bool mistakes_hurt = true;
  bool in_band = true;
  for (const auto& g : gaps) {
    if (g.points.empty()) continue;
    if (g.family == "mistake" && !(g.points.back().mean > t.threshold)) mistakes_hurt = false;
    if (g.family == "analogue") {
      for (const auto& p : g.points) {
        if (!(std::abs(p.mean) <= p.band)) in_band = false;
      }
    }
  }
  if (!in_band) return "not-recovered";
  return mistakes_hurt ? "recovered" : "indeterminate";
}

namespace {

struct Job {
  std::size_t curve;  // index into report.curves
  std::size_t point;  // checkpoint index; unused in continual mode
};

// Runs every (seed, arm, checkpoint) job and fills report.curves.
void run_curves(AuditReport& report, const std::vector<std::vector<Curriculum>>& per_seed_curricula,
                const std::vector<Sources>& per_seed_sources, const std::vector<Dataset>& new_tests,
                const AuditSettings& settings, const CurveOptions& options) {
  std::vector<Dataset> data;
  std::vector<std::vector<std::size_t>> checkpoints;
  std::vector<const Curriculum*> arms;
  std::vector<std::size_t> seed_of;
  for (std::size_t s = 0; s < settings.seeds.size(); ++s) {
    const auto& curricula = per_seed_curricula[s];
    std::size_t common = SIZE_MAX;
    for (const auto& c : curricula) common = std::min(common, c.size());
    for (const auto& c : curricula) {
      data.push_back(c.materialize(per_seed_sources[s]));
      checkpoints.push_back(settings.checkpoints.resolve(common, c.size()));
      arms.push_back(&c);
      seed_of.push_back(s);
      LearningCurve curve{c.name, settings.seeds[s], {}};
      curve.points.resize(checkpoints.back().size());
      report.curves.push_back(std::move(curve));
    }
  }

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < report.curves.size(); ++c) {
    if (options.continual) {
      jobs.push_back({c, 0});
    } else {
      for (std::size_t p = 0; p < checkpoints[c].size(); ++p) jobs.push_back({c, p});
    }
  }
  parallel_for(jobs.size(), settings.jobs, [&](std::size_t j) {
    const Job job = jobs[j];
    const std::uint64_t seed = settings.seeds[seed_of[job.curve]];
    const Dataset& new_test = new_tests[seed_of[job.curve]];
    if (options.continual) {
      CurveOptions o = options;
      o.train.seed = seed;
      report.curves[job.curve] =
          continual_curve(*arms[job.curve], data[job.curve], new_test, checkpoints[job.curve], o);
      return;
    }
    const std::size_t k = checkpoints[job.curve][job.point];
    report.curves[job.curve].points[job.point] = {
        k, train_and_evaluate(prefix_of(data[job.curve], k), new_test, options,
                              checkpoint_seed(seed, arms[job.curve]->seed_key, job.point))};
  });
}

SegmentSlopes train_test_slopes(std::span<const LearningCurve> curves, std::size_t x) {
  // Mean TrainTest curve over seeds; all seeds share the checkpoint grid.
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const auto& c : curves) {
    if (c.arm != "TrainTest") continue;
    for (const auto& p : c.points) {
      acc[p.prefix].first += p.eval.f1;
      ++acc[p.prefix].second;
    }
  }
  std::vector<std::pair<std::size_t, double>> mean;
  for (const auto& [k, v] : acc) mean.emplace_back(k, v.first / static_cast<double>(v.second));
  SegmentSlopes out;
  if (mean.empty()) return out;
  // Last checkpoint inside the leading training segment.
  std::size_t boundary = 0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (mean[i].first <= x) boundary = i;
  }
  const auto& first = mean.front();
  const auto& mid = mean[boundary];
  const auto& last = mean.back();
  out.clean = mid.first > first.first
                  ? (mid.second - first.second) / static_cast<double>(mid.first - first.first)
                  : mid.second / static_cast<double>(mid.first);
  out.corrupted = last.first > mid.first
                      ? (last.second - mid.second) / static_cast<double>(last.first - mid.first)
                      : 0.0;
  return out;
}

double window_mean(const GapSeries& g, std::size_t window) {
  if (g.points.empty()) return 0.0;
  window = std::min(window, g.points.size());
  double s = 0.0;
  for (std::size_t i = 0; i < window; ++i) s += g.points[i].mean;
  return s / static_cast<double>(window);
}

void check_settings(const AuditSettings& settings) {
  if (settings.seeds.empty()) throw ConfigError("at least one seed is required");
  if (!(settings.thresholds.threshold >= 0.0)) throw ConfigError("threshold must be non-negative");
  settings.curve.train.validate();
}

}  // namespace

AuditReport run_identify(const Dataset& train, const Dataset& test, std::size_t x,
                         const AuditSettings& settings) {
  check_settings(settings);
  AuditReport report;
  report.protocol = "identify";
  report.seeds = settings.seeds;

  CurveOptions options = settings.curve;
  if (options.entity_types.empty()) options.entity_types = union_alphabet({&train, &test});

  std::vector<std::vector<Curriculum>> curricula;
  std::vector<Sources> sources;
  std::vector<Dataset> new_tests;
  for (std::uint64_t seed : settings.seeds) {
    report.identify_plans.push_back(make_identify_plan(
        train, test, x, seed, report.identify_plans.empty() ? &report.warnings : nullptr));
    const auto& plan = report.identify_plans.back();
    curricula.push_back(build_identify_curricula(plan));
    sources.push_back({&train, &test, nullptr, nullptr, nullptr});
    new_tests.push_back(train.subset(plan.new_test, "new_test"));
  }
  report.curricula = curricula.front();
  run_curves(report, curricula, sources, new_tests, settings, options);

  report.gaps = identify_gaps(report.curves, report.seeds, settings.thresholds.threshold);
  report.thresholds = settings.thresholds;
  report.thresholds.early_window = window_size(settings.thresholds, report.gaps.front().points.size());
  report.early_window_mean_gap = window_mean(report.gaps.front(), report.thresholds.early_window);
  report.train_test_slopes = train_test_slopes(report.curves, x);
  report.verdict = identify_verdict(report.gaps, report.thresholds);
  report.rule = identify_rule(report.thresholds);
  return report;
}

AuditReport run_validate(const Dataset& train, const Dataset& test_good, const Dataset& test_mistake,
                         const Dataset& test_corrected, std::size_t x, std::size_t y, std::size_t z,
                         std::size_t w, const AuditSettings& settings) {
  check_settings(settings);
  AuditReport report;
  report.protocol = "validate";
  report.seeds = settings.seeds;
  if (z == 0)
    report.warnings.push_back("validate: z = 0, no corrected sentences; the run is degenerate");

  CurveOptions options = settings.curve;
  if (options.entity_types.empty())
    options.entity_types = union_alphabet({&train, &test_good, &test_mistake, &test_corrected});

  std::vector<std::vector<Curriculum>> curricula;
  std::vector<Sources> sources;
  std::vector<Dataset> new_tests;
  for (std::uint64_t seed : settings.seeds) {
    report.validate_plans.push_back(
        make_validate_plan(train, test_good, test_mistake, test_corrected, x, y, z, w, seed));
    const auto& plan = report.validate_plans.back();
    curricula.push_back(build_validate_curricula(plan));
    sources.push_back({&train, nullptr, &test_good, &test_mistake, &test_corrected});
    new_tests.push_back(train.subset(plan.train_x, "new_test"));
  }
  report.curricula = curricula.front();
  run_curves(report, curricula, sources, new_tests, settings, options);

  report.gaps = validate_gaps(report.curves, report.seeds, settings.thresholds.threshold);
  report.thresholds = settings.thresholds;
  report.thresholds.early_window = window_size(settings.thresholds, report.gaps.front().points.size());
  report.verdict = validate_verdict(report.gaps, report.thresholds, z);
  report.rule = validate_rule(report.thresholds);
  return report;
}

}  // namespace labelaudit::protocol
