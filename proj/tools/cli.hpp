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

// Command implementations behind the labelaudit executable.

#ifndef LABELAUDIT_TOOLS_CLI_HPP_
#define LABELAUDIT_TOOLS_CLI_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "labelaudit/tagger.hpp"

namespace labelaudit::cli {

// Everything a command needs; flags, config file and defaults are merged
// into this before a command runs.
struct RunConfig {
  std::string command;

  std::string train;
  std::string test;
  std::string test_good;
  std::string test_mistake;
  std::string test_corrected;
  std::size_t token_column = 0;
  std::optional<std::size_t> tag_column;  // unset: last column
  std::string out = "labelaudit-out";

  std::optional<std::size_t> x, y, z, w;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<std::size_t> checkpoints = {10};  // one value: count; several: explicit sizes

  tagger::TrainConfig train_config;
  std::vector<std::string> templates;
  bool continual = false;
  double threshold = 0.02;
  std::size_t early_window = 0;
  std::size_t jobs = 0;  // 0: all cores; never recorded, results do not depend on it

  // synth
  std::size_t train_sentences = 2000;
  std::size_t test_sentences = 551;
  std::size_t vocab = 1000;
  std::vector<std::string> types = {"PER", "LOC", "ORG"};
  double name_share = 0.5;
  double trigger_probability = 0.9;
  std::uint64_t synth_seed = 2026;
  double corruption_fraction = 0.267;
  std::string corruption_mode = "type-permutation";
  std::uint64_t corruption_seed = 7;

  // eval / plot
  std::string model;
  std::string report;
};

// The fields relevant to config.command, with resolved sizes, plus the
// tool version.
nlohmann::json to_json(const RunConfig& config);

std::string tool_version();

// Each returns the process exit code on success (0) and throws on failure.
int cmd_identify(RunConfig config);
int cmd_validate(RunConfig config);
int cmd_synth(const RunConfig& config);
int cmd_eval(const RunConfig& config);
int cmd_plot(const RunConfig& config);

}  // namespace labelaudit::cli

#endif  // LABELAUDIT_TOOLS_CLI_HPP_
