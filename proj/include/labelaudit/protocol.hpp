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

// Label-consistency audits driven by ordered training curricula.
//
// identify: three disjoint training subsets of size x are sampled; one is the
// new test set. Models are fed TrainTest = [blue, test], PureTrain =
// [green, blue] and TestTrain = [test, blue]. A test set labeled with a
// different codebook shows up as a TestTrain deficit at the early prefixes.
//
// validate: the test set is split into its good part Test(y) and the z
// sentences that were corrected (Mistake / Correct). Training subsets of
// sizes x (new test), y (Train_y2) and w are sampled and eight curricula of
// y + w + z sentences are compared.

#ifndef LABELAUDIT_PROTOCOL_HPP_
#define LABELAUDIT_PROTOCOL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "labelaudit/corpus.hpp"
#include "labelaudit/eval.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::protocol {

using corpus::Dataset;

enum class Source { kTrain, kTest, kTestGood, kTestMistake, kTestCorrected };

std::string_view to_string(Source source);
Source source_from_string(std::string_view name);

// Datasets a curriculum's segments refer to. Unused ones may stay null.
struct Sources {
  const Dataset* train = nullptr;
  const Dataset* test = nullptr;
  const Dataset* test_good = nullptr;
  const Dataset* test_mistake = nullptr;
  const Dataset* test_corrected = nullptr;

  const Dataset& get(Source source) const;
};

struct Segment {
  std::string label;
  Source source = Source::kTrain;
  std::vector<std::size_t> indices;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Curriculum {
  std::string name;
  // Name used to derive per-checkpoint training seeds. All arms of one
  // protocol share it, so gaps compare data order under the same SGD
  // shuffles, and Mistake/Correct variants with identical data produce
  // identical curves.
  std::string seed_key;
  std::vector<Segment> segments;

  std::size_t size() const;
  Dataset materialize(const Sources& sources) const;

  friend bool operator==(const Curriculum&, const Curriculum&) = default;
};

struct IdentifyPlan {
  std::size_t x = 0;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<std::size_t> new_test;  // training indices
  std::vector<std::size_t> blue;      // training indices
  std::vector<std::size_t> green;     // training indices
  std::vector<std::size_t> external_set;  // the whole original test set, in seeded feeding order

  friend bool operator==(const IdentifyPlan&, const IdentifyPlan&) = default;
};

// Throws ConfigError (carrying the largest feasible x) when 3x > |train|.
// Appends a warning when x > |test|.
IdentifyPlan make_identify_plan(const Dataset& train, const Dataset& test, std::size_t x,
                                std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

// TrainTest, PureTrain, TestTrain, in that order.
std::vector<Curriculum> build_identify_curricula(const IdentifyPlan& plan);

struct ValidatePlan {
  std::size_t x = 0, y = 0, z = 0, w = 0;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  // All of test_good / test_mistake / test_corrected, in seeded feeding
  // order; mistake and correct share one order.
  std::vector<std::size_t> test_good;
  std::vector<std::size_t> mistake;
  std::vector<std::size_t> correct;
  std::vector<std::size_t> train_x;     // new test set, training indices
  std::vector<std::size_t> train_y2;    // training indices
  std::vector<std::size_t> train_w;     // training indices

  friend bool operator==(const ValidatePlan&, const ValidatePlan&) = default;
};

// Mistake and corrected sets must be aligned sentence-for-sentence (same
// token texts); the first misaligned sentence is named otherwise.
ValidatePlan make_validate_plan(const Dataset& train, const Dataset& test_good,
                                const Dataset& test_mistake, const Dataset& test_corrected,
                                std::size_t x, std::size_t y, std::size_t z, std::size_t w,
                                std::uint64_t seed);

// TestTrainMistake, TestTrainCorrect, PureTrainMistake, PureTrainCorrect,
// MistakeTestTrain, CorrectTestTrain, MistakePureTrain, CorrectPureTrain.
std::vector<Curriculum> build_validate_curricula(const ValidatePlan& plan);

// Evenly spaced prefix sizes round(i * n / count), i = 1..count, deduplicated.
std::vector<std::size_t> checkpoint_grid(std::size_t n, std::size_t count);

struct CheckpointSpec {
  std::size_t count = 10;
  std::vector<std::size_t> sizes;  // explicit prefix sizes; overrides count

  // Checkpoints for an arm of `arm_size` when the shortest arm in the
  // comparison has `common_size` sentences. The arm's full size is always
  // the final checkpoint.
  std::vector<std::size_t> resolve(std::size_t common_size, std::size_t arm_size) const;
};

struct CurveOptions {
  tagger::TrainConfig train;
  std::vector<tagger::FeatureTemplate> templates = tagger::default_templates();
  // Warm-start each checkpoint from the previous one instead of retraining
  // from scratch on the prefix.
  bool continual = false;
  // Label inventory for every model of the curve; empty means the
  // curriculum's own alphabet.
  std::set<std::string> entity_types;
};

struct CurvePoint {
  std::size_t prefix = 0;
  eval::EvalResult eval;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct LearningCurve {
  std::string arm;
  std::uint64_t seed = 0;
  std::vector<CurvePoint> points;

  friend bool operator==(const LearningCurve&, const LearningCurve&) = default;
};

// Training seed for checkpoint `index` of a curve.
std::uint64_t checkpoint_seed(std::uint64_t seed, std::string_view seed_key, std::size_t index);

// Trains on each ordered prefix and evaluates on `new_test`. The curve's
// seed is options.train.seed. `jobs` > 1 evaluates checkpoints concurrently
// (prefix mode only); results do not depend on it.
LearningCurve run_curve(const Curriculum& curriculum, const Sources& sources, const Dataset& new_test,
                        std::span<const std::size_t> checkpoints, const CurveOptions& options,
                        std::size_t jobs = 1);

// Runs fn(0..n-1) on up to `jobs` threads. Rethrows the exception of the
// lowest failing index.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

struct GapPoint {
  std::size_t prefix = 0;
  std::vector<double> per_seed;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double sd = 0.0;          // sample standard deviation over seeds
  double band = 0.0;        // noise band half-width, max(threshold, 2 sd)

  friend bool operator==(const GapPoint&, const GapPoint&) = default;
};

// F1(minuend) - F1(subtrahend) at every checkpoint both arms share.
struct GapSeries {
  std::string name;
  // identify: "primary" or "pair"; validate: "mistake" (Correct - Mistake
  // of one ordering) or "analogue" (Correct variant - PureTrain analogue).
  std::string family;
  std::string minuend;
  std::string subtrahend;
  std::vector<GapPoint> points;

  friend bool operator==(const GapSeries&, const GapSeries&) = default;
};

GapSeries compute_gap(std::span<const LearningCurve> curves, std::span<const std::uint64_t> seeds,
                      const std::string& minuend, const std::string& subtrahend, double threshold,
                      std::string family = {});

struct Thresholds {
  double threshold = 0.02;  // F1 units, i.e. 2 points
  std::size_t early_window = 0;  // number of leading checkpoints; 0 = half of them

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct AuditSettings {
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  CheckpointSpec checkpoints;
  CurveOptions curve;
  Thresholds thresholds;
  std::size_t jobs = 1;
};

struct SegmentSlopes {
  double clean = 0.0;      // F1 per sentence over the leading training segment
  double corrupted = 0.0;  // F1 per sentence once the test segment is fed
  friend bool operator==(const SegmentSlopes&, const SegmentSlopes&) = default;
};

struct AuditReport {
  std::string protocol;  // "identify" or "validate"
  std::vector<std::uint64_t> seeds;
  Thresholds thresholds;  // early_window resolved
  std::vector<IdentifyPlan> identify_plans;
  std::vector<ValidatePlan> validate_plans;
  std::vector<Curriculum> curricula;  // of the first seed, for reference
  std::vector<LearningCurve> curves;  // seed-major, arm order within a seed
  std::vector<GapSeries> gaps;
  double early_window_mean_gap = 0.0;  // identify: mean PureTrain - TestTrain over the window
  std::optional<SegmentSlopes> train_test_slopes;  // identify only
  std::string verdict;
  std::string rule;
  std::vector<std::string> warnings;
  nlohmann::json run_config;  // producing configuration, filled by the caller

  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

inline constexpr std::string_view kPrimaryIdentifyGap = "PureTrain-TestTrain";

AuditReport run_identify(const Dataset& train, const Dataset& test, std::size_t x,
                         const AuditSettings& settings);

AuditReport run_validate(const Dataset& train, const Dataset& test_good, const Dataset& test_mistake,
                         const Dataset& test_corrected, std::size_t x, std::size_t y, std::size_t z,
                         std::size_t w, const AuditSettings& settings);

// Verdict rules, pure functions of the stored gaps and thresholds.
//
// identify: "inconsistent" iff over the early window every mean gap of
// PureTrain - TestTrain exceeds the threshold and every per-seed gap is
// positive; "consistent" iff every arm-pair mean gap in the window has
// magnitude below the threshold; otherwise "indeterminate".
std::string identify_verdict(std::span<const GapSeries> gaps, const Thresholds& thresholds);

// validate: "recovered" iff each ordering's final Correct - Mistake mean gap
// exceeds the threshold and each Correct variant stays within the noise band
// of its PureTrain analogue at every checkpoint; "not-recovered" when a
// Correct variant leaves that band; otherwise "indeterminate". With z = 0
// the run is degenerate and "recovered".
std::string validate_verdict(std::span<const GapSeries> gaps, const Thresholds& thresholds,
                             std::size_t z);

std::string identify_rule(const Thresholds& thresholds);
std::string validate_rule(const Thresholds& thresholds);

// Gap families recomputed from curves; run_* stores exactly these.
std::vector<GapSeries> identify_gaps(std::span<const LearningCurve> curves,
                                     std::span<const std::uint64_t> seeds, double threshold);
std::vector<GapSeries> validate_gaps(std::span<const LearningCurve> curves,
                                     std::span<const std::uint64_t> seeds, double threshold);

}  // namespace labelaudit::protocol

#endif  // LABELAUDIT_PROTOCOL_HPP_
