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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "labelaudit/errors.hpp"
#include "labelaudit/eval.hpp"
#include "labelaudit/files.hpp"
#include "labelaudit/protocol.hpp"
#include "labelaudit/report.hpp"
#include "labelaudit/serialization.hpp"

#ifndef LABELAUDIT_VERSION
#define LABELAUDIT_VERSION "0.0.0"
#endif

namespace labelaudit::cli {

namespace fs = std::filesystem;
using corpus::Dataset;

std::string tool_version() { return LABELAUDIT_VERSION; }

namespace {

void require(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) throw ConfigError(command + ": " + flag + " is required");
}

Dataset load(const std::string& path, const RunConfig& c) {
  return corpus::read_conll_file(path, {c.token_column, c.tag_column});
}

nlohmann::json optional_size(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<std::string> template_ids(const RunConfig& c) {
  if (!c.templates.empty()) return c.templates;
  std::vector<std::string> ids;
  for (const auto& t : tagger::default_templates()) ids.push_back(t.id);
  return ids;
}

protocol::AuditSettings settings_of(const RunConfig& c) {
  protocol::AuditSettings s;
  s.seeds = c.seeds;
  if (c.checkpoints.size() == 1) {
    s.checkpoints.count = c.checkpoints[0];
    if (s.checkpoints.count == 0) throw ConfigError("--checkpoints count must be positive");
  } else {
    s.checkpoints.sizes = c.checkpoints;
  }
  s.curve.train = c.train_config;
  s.curve.templates = tagger::templates_from_ids(template_ids(c));
  s.curve.continual = c.continual;
  s.thresholds.threshold = c.threshold;
  s.thresholds.early_window = c.early_window;
  s.jobs = c.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.jobs;
  return s;
}

std::string points(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f", 100.0 * v);
  return buf;
}

void publish(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  StagedOutputs staged;
  for (const auto& [name, contents] : files) staged.add(dir / name, contents);
  staged.commit();
  for (const auto& [name, contents] : files) std::cout << "wrote " << (dir / name).string() << "\n";
}

void write_report(const protocol::AuditReport& report, const RunConfig& c) {
  publish(c.out, {{"report.json", report::to_json_text(report, tool_version())},
                  {"curves.csv", report::to_csv(report)},
                  {"curves.svg", report::to_svg(report::plot_spec(report))}});
}

void print_warnings(const protocol::AuditReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["tool_version"] = tool_version();
  const bool audit = c.command == "identify" || c.command == "validate";
  if (audit || c.command == "eval") {
    j["train"] = c.train;
    j["token_column"] = c.token_column;
    j["tag_column"] = optional_size(c.tag_column);
    j["train_config"] = c.train_config;
    j["templates"] = template_ids(c);
  }
  if (c.command == "identify" || c.command == "eval") j["test"] = c.test;
  if (c.command == "validate") {
    j["test_good"] = c.test_good;
    j["test_mistake"] = c.test_mistake;
    j["test_corrected"] = c.test_corrected;
    j["y"] = optional_size(c.y);
    j["z"] = optional_size(c.z);
    j["w"] = optional_size(c.w);
  }
  if (audit) {
    j["x"] = optional_size(c.x);
    j["seeds"] = c.seeds;
    j["checkpoints"] = c.checkpoints;
    j["continual"] = c.continual;
    j["threshold"] = c.threshold;
    j["early_window"] = c.early_window;
  }
  if (c.command == "eval") j["model"] = c.model;
  if (c.command == "synth") {
    j["train_sentences"] = c.train_sentences;
    j["test_sentences"] = c.test_sentences;
    j["vocab"] = c.vocab;
    j["types"] = c.types;
    j["name_share"] = c.name_share;
    j["trigger_probability"] = c.trigger_probability;
    j["synth_seed"] = c.synth_seed;
    j["corruption_fraction"] = c.corruption_fraction;
    j["corruption_mode"] = c.corruption_mode;
    j["corruption_seed"] = c.corruption_seed;
  }
  if (c.command == "plot") j["report"] = c.report;
  j["out"] = c.out;
  return j;
}

int cmd_identify(RunConfig c) {
  require(c.train, "--train", "identify");
  require(c.test, "--test", "identify");
  auto settings = settings_of(c);
  const Dataset train = load(c.train, c);
  const Dataset test = load(c.test, c);
  // Default: the size of the original test set, capped by feasibility.
  if (!c.x) c.x = std::min(test.size(), train.size() / 3);

  std::cerr << "identify: |train| = " << train.size() << ", |test| = " << test.size() << ", x = " << *c.x
            << ", " << settings.seeds.size() << " seeds, " << settings.jobs << " jobs\n";
  auto report = protocol::run_identify(train, test, *c.x, settings);
  report.run_config = to_json(c);
  print_warnings(report);

  std::cout << "verdict: " << report.verdict << "\n";
  std::cout << "rule: " << report.rule << "\n";
  std::cout << "early-window gaps in F1 points, mean [min, max] over " << report.seeds.size() << " seeds:\n";
  std::printf("%8s", "prefix");
  for (const auto& g : report.gaps) std::printf("  %-28s", g.name.c_str());
  std::printf("\n");
  const std::size_t window = report.thresholds.early_window;
  for (std::size_t i = 0; i < window && i < report.gaps.front().points.size(); ++i) {
    std::printf("%8zu", report.gaps.front().points[i].prefix);
    for (const auto& g : report.gaps) {
      const auto& p = g.points[i];
      const std::string cell = points(p.mean) + " [" + points(p.min) + ", " + points(p.max) + "]";
      std::printf("  %-28s", cell.c_str());
    }
    std::printf("\n");
  }
  std::cout << "early-window mean gap " << protocol::kPrimaryIdentifyGap << ": "
            << points(report.early_window_mean_gap) << " F1 points\n";
  if (report.train_test_slopes) {
    std::printf("TrainTest slope per 1000 sentences: clean segment %.4f, test segment %.4f\n",
                1000.0 * report.train_test_slopes->clean, 1000.0 * report.train_test_slopes->corrupted);
  }
  std::cout.flush();
  write_report(report, c);
  return 0;
}

int cmd_validate(RunConfig c) {
  require(c.train, "--train", "validate");
  require(c.test_good, "--test-good", "validate");
  require(c.test_mistake, "--test-mistake", "validate");
  require(c.test_corrected, "--test-corrected", "validate");
  auto settings = settings_of(c);
  const Dataset train = load(c.train, c);
  const Dataset good = load(c.test_good, c);
  const Dataset mistake = load(c.test_mistake, c);
  const Dataset corrected = load(c.test_corrected, c);
  if (!c.y) c.y = good.size();
  if (!c.z) c.z = mistake.size();
  if (!c.x) c.x = std::min(*c.y + *c.z, train.size() / 3);
  if (!c.w) {
    if (*c.x + *c.y > train.size())
      throw ConfigError("validate: x + y = " + std::to_string(*c.x + *c.y) + " exceeds the training set");
    c.w = train.size() - *c.x - *c.y;
  }

  std::cerr << "validate: x = " << *c.x << ", y = " << *c.y << ", z = " << *c.z << ", w = " << *c.w << ", "
            << settings.seeds.size() << " seeds, " << settings.jobs << " jobs\n";
  auto report = protocol::run_validate(train, good, mistake, corrected, *c.x, *c.y, *c.z, *c.w, settings);
  report.run_config = to_json(c);
  print_warnings(report);

  std::cout << "verdict: " << report.verdict << "\n";
  std::cout << "rule: " << report.rule << "\n";
  std::cout << "final gaps in F1 points, mean [min, max] over " << report.seeds.size() << " seeds:\n";
  for (const auto& g : report.gaps) {
    if (g.points.empty()) continue;
    const auto& p = g.points.back();
    double worst = 0.0;
    for (const auto& q : g.points) worst = std::max(worst, std::abs(q.mean) - q.band);
    std::printf("  %-8s %-36s %s [%s, %s]%s\n", g.family.c_str(), g.name.c_str(), points(p.mean).c_str(),
                points(p.min).c_str(), points(p.max).c_str(),
                g.family == "analogue" ? (worst <= 0.0 ? "  within band" : "  outside band") : "");
  }
  std::cout.flush();
  write_report(report, c);
  return 0;
}

int cmd_synth(const RunConfig& c) {
  if (c.test_sentences == 0) throw ConfigError("synth: --test-sentences must be positive");
  corpus::SynthParams params;
  params.n_sentences = c.train_sentences + c.test_sentences;
  params.vocab_size = c.vocab;
  params.entity_types = c.types;
  params.seed = c.synth_seed;
  params.name_share = c.name_share;
  params.trigger_probability = c.trigger_probability;
  if (!(c.name_share > 0.0 && c.name_share < 1.0)) throw ConfigError("synth: --name-share must lie in (0, 1)");
  if (!(c.trigger_probability >= 0.0 && c.trigger_probability <= 1.0))
    throw ConfigError("synth: --trigger-probability must lie in [0, 1]");
  if (c.train_sentences == 0) throw ConfigError("synth: --train-sentences must be positive");

  const Dataset all = corpus::synthesize_corpus(params);
  auto [train, test] = corpus::split_head(all, c.train_sentences);
  const auto corruption = corpus::corrupt_labels(
      test, {c.corruption_fraction, corpus::corruption_mode_from_string(c.corruption_mode), c.corruption_seed});

  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!std::ranges::binary_search(corruption.corrupted, i)) good.push_back(i);
  }

  nlohmann::json manifest;
  manifest["format"] = "labelaudit-synth-manifest";
  manifest["run_config"] = to_json(c);
  manifest["corrupted"] = corruption.corrupted;
  manifest["sizes"] = {{"train", train.size()},
                       {"test", test.size()},
                       {"test_good", good.size()},
                       {"test_mistake", corruption.corrupted.size()}};
  manifest["files"] = {{"train", "train.conll"},
                       {"test", "test.conll"},
                       {"test_clean", "test_clean.conll"},
                       {"test_good", "test_good.conll"},
                       {"test_mistake", "test_mistake.conll"},
                       {"test_corrected", "test_corrected.conll"}};

  publish(c.out, {{"train.conll", corpus::serialize_conll(train)},
                  {"test.conll", corpus::serialize_conll(corruption.dataset)},
                  {"test_clean.conll", corpus::serialize_conll(test)},
                  {"test_good.conll", corpus::serialize_conll(test.subset(good))},
                  {"test_mistake.conll", corpus::serialize_conll(corruption.dataset.subset(corruption.corrupted))},
                  {"test_corrected.conll", corpus::serialize_conll(test.subset(corruption.corrupted))},
                  {"manifest.json", manifest.dump(1) + "\n"}});
  std::cout << "corrupted " << corruption.corrupted.size() << " of " << test.size() << " test sentences ("
            << c.corruption_mode << ")\n";
  return 0;
}

int cmd_eval(const RunConfig& c) {
  require(c.train, "--train", "eval");
  require(c.test, "--test", "eval");
  c.train_config.validate();
  const Dataset train = load(c.train, c);
  const Dataset test = load(c.test, c);
  auto types = train.label_alphabet();
  types.insert(test.label_alphabet().begin(), test.label_alphabet().end());
  const auto templates = tagger::templates_from_ids(template_ids(c));
  const auto model = tagger::train(train, templates, c.train_config, {.entity_types = types, .trace = nullptr});
  const auto result = eval::evaluate_model(model, test);

  std::cout << eval::format_report(result);
  std::cout << "P R F1\n" << eval::format_prf_row(result) << "\n";
  std::cout.flush();

  nlohmann::json summary;
  summary["format"] = "labelaudit-eval";
  summary["run_config"] = to_json(c);
  summary["result"] = result;
  const fs::path model_path = c.model.empty() ? fs::path(c.out) / "model.json" : fs::path(c.model);
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw IoError("cannot create output directory '" + c.out + "': " + ec.message());
  StagedOutputs staged;
  staged.add(model_path, tagger::serialize_model(model));
  staged.add(fs::path(c.out) / "eval.json", summary.dump(1) + "\n");
  staged.commit();
  std::cout << "wrote " << model_path.string() << "\n";
  std::cout << "wrote " << (fs::path(c.out) / "eval.json").string() << "\n";
  return 0;
}

int cmd_plot(const RunConfig& c) {
  require(c.report, "--report", "plot");
  const auto report = report::from_json_text(read_file(c.report));
  publish(c.out, {{"curves.svg", report::to_svg(report::plot_spec(report))}});
  return 0;
}

}  // namespace labelaudit::cli
