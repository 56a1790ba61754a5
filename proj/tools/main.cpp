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

// labelaudit: label-consistency audits for sequence-labeling datasets.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 numeric failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "labelaudit/errors.hpp"
#include "labelaudit/files.hpp"

namespace {

using labelaudit::cli::RunConfig;

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kNumeric = 3;

void add_inputs(CLI::App* app, RunConfig& c) {
  app->add_option("--token-column", c.token_column, "0-based token column")->capture_default_str();
  app->add_option("--tag-column", c.tag_column, "0-based tag column (default: last)");
}

void add_training(CLI::App* app, RunConfig& c) {
  auto& t = c.train_config;
  app->add_option("--epochs", t.epochs, "passes over the training data")->capture_default_str();
  app->add_option("--learning-rate", t.learning_rate, "AdaGrad step size")->capture_default_str();
  app->add_option("--l2", t.l2, "L2 regularization strength")->capture_default_str();
  app->add_option("--adagrad-epsilon", t.adagrad_epsilon)->capture_default_str();
  app->add_option("--min-count", t.min_count, "feature frequency cutoff")->capture_default_str();
  app->add_flag("--full-batch", t.full_batch, "one exact full-batch step per epoch");
  app->add_flag("!--no-shuffle", t.shuffle, "keep sentence order fixed across epochs");
  app->add_option("--templates", c.templates, "feature template ids")->delimiter(',');
}

void add_audit(CLI::App* app, RunConfig& c) {
  app->add_option("--train", c.train, "training set (CoNLL)");
  app->add_option("--x", c.x, "size of each sampled training subset");
  app->add_option("--seeds", c.seeds, "comma-separated seeds")->delimiter(',')->capture_default_str();
  app->add_option("--checkpoints", c.checkpoints,
                  "one value: number of evenly spaced checkpoints; several: explicit prefix sizes")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--threshold", c.threshold, "verdict threshold in F1 units")->capture_default_str();
  app->add_option("--early-window", c.early_window, "leading checkpoints judged (0: half)")
      ->capture_default_str();
  app->add_flag("--continual", c.continual, "warm-start each checkpoint from the previous one");
  app->add_option("--jobs", c.jobs, "worker threads (0: all cores)")->capture_default_str();
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  add_inputs(app, c);
  add_training(app, c);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  std::string config_path;

  CLI::App app{"Label-consistency audits for sequence-labeling datasets", "labelaudit"};
  app.set_version_flag("--version", labelaudit::cli::tool_version());
  app.require_subcommand(1);

  auto* identify = app.add_subcommand("identify", "test whether a test set was labeled like the training set");
  add_audit(identify, c);
  identify->add_option("--test", c.test, "test set to audit (CoNLL)");

  auto* validate = app.add_subcommand("validate", "check that corrected test sentences match the training labels");
  add_audit(validate, c);
  validate->add_option("--test-good", c.test_good, "test sentences that were not corrected");
  validate->add_option("--test-mistake", c.test_mistake, "corrected sentences, original labels");
  validate->add_option("--test-corrected", c.test_corrected, "corrected sentences, corrected labels");
  validate->add_option("--y", c.y, "number of good test sentences");
  validate->add_option("--z", c.z, "number of corrected sentences");
  validate->add_option("--w", c.w, "size of the shared training subset");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with a corrupted test set");
  synth->add_option("--train-sentences", c.train_sentences)->capture_default_str();
  synth->add_option("--test-sentences", c.test_sentences)->capture_default_str();
  synth->add_option("--vocab", c.vocab, "distinct word types")->capture_default_str();
  synth->add_option("--types", c.types, "entity types")->delimiter(',')->capture_default_str();
  synth->add_option("--name-share", c.name_share, "vocabulary share of entity names")->capture_default_str();
  synth->add_option("--trigger-probability", c.trigger_probability)->capture_default_str();
  synth->add_option("--seed", c.synth_seed)->capture_default_str();
  synth->add_option("--fraction", c.corruption_fraction, "share of test sentences to corrupt")
      ->capture_default_str();
  synth->add_option("--mode", c.corruption_mode, "type-permutation, boundary-shift or span-drop")
      ->capture_default_str();
  synth->add_option("--corruption-seed", c.corruption_seed)->capture_default_str();
  synth->add_option("--out", c.out, "output directory")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "train on one file and score another");
  eval->add_option("--train", c.train, "training set (CoNLL)");
  eval->add_option("--test", c.test, "evaluation set (CoNLL)");
  eval->add_option("--seed", c.train_config.seed, "training seed")->capture_default_str();
  eval->add_option("--model", c.model, "model output path (default: <out>/model.json)");
  eval->add_option("--out", c.out, "output directory")->capture_default_str();
  add_inputs(eval, c);
  add_training(eval, c);

  auto* plot = app.add_subcommand("plot", "re-render the SVG of a report");
  plot->add_option("--report", c.report, "report JSON");
  plot->add_option("--out", c.out, "output directory")->capture_default_str();

  for (auto* sub : {identify, validate, synth, eval, plot}) {
    sub->add_option("--config", config_path, "TOML config file; flags take precedence");
    sub->allow_config_extras(CLI::config_extras_mode::error);
  }

  try {
    app.parse(argc, argv);
    CLI::App* chosen = app.get_subcommands().front();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw CLI::FileError::Missing(config_path);
      chosen->parse_from_stream(in);
    }
    c.command = chosen->get_name();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (c.command == "identify") return labelaudit::cli::cmd_identify(c);
    if (c.command == "validate") return labelaudit::cli::cmd_validate(c);
    if (c.command == "synth") return labelaudit::cli::cmd_synth(c);
    if (c.command == "eval") return labelaudit::cli::cmd_eval(c);
    return labelaudit::cli::cmd_plot(c);
  } catch (const labelaudit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const labelaudit::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const labelaudit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const labelaudit::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kNumeric;
  }
}
