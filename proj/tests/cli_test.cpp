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

// End-to-end runs of the labelaudit executable.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "labelaudit/files.hpp"

namespace fs = std::filesystem;
using labelaudit::read_file;

namespace {

struct Run {
  int code;
  std::string output;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("labelaudit_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const auto log = scratch() / "last.log";
  const std::string cmd = std::string(LABELAUDIT_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(log)};
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

// Small synthetic data set shared by the tests.
const fs::path& data() {
  static const fs::path dir = [] {
    const auto r = run("synth --train-sentences 240 --test-sentences 80 --out " + path("data"));
    REQUIRE(r.code == 0);
    return scratch() / "data";
  }();
  return dir;
}

std::string file(const std::string& name) { return (data() / name).string(); }

const std::string kQuick = " --seeds 1,2 --checkpoints 3 --epochs 2";

}  // namespace

TEST_CASE("synth is deterministic and counts corrupted sentences") {
  REQUIRE(run("synth --train-sentences 50 --test-sentences 551 --out " + path("s1")).code == 0);
  REQUIRE(run("synth --train-sentences 50 --test-sentences 551 --out " + path("s2")).code == 0);
  for (const char* f : {"train.conll", "test.conll", "test_corrected.conll"})
    CHECK(read_file(scratch() / "s1" / f) == read_file(scratch() / "s2" / f));
  auto manifest = nlohmann::json::parse(read_file(scratch() / "s1" / "manifest.json"));
  auto other = nlohmann::json::parse(read_file(scratch() / "s2" / "manifest.json"));
  // Only the recorded output directory differs.
  manifest["run_config"].erase("out");
  other["run_config"].erase("out");
  CHECK(manifest == other);
  CHECK(manifest["corrupted"].size() == 147);
  CHECK(manifest["sizes"]["test_good"] == 404);

  REQUIRE(run("synth --train-sentences 10 --test-sentences 3453 --fraction 0.0538 --out " + path("s3")).code == 0);
  CHECK(nlohmann::json::parse(read_file(scratch() / "s3" / "manifest.json"))["corrupted"].size() == 186);

  CHECK(run("synth --fraction 1.5 --out " + path("s4")).code == 1);
  CHECK(!fs::exists(scratch() / "s4"));
}

TEST_CASE("identify writes a self-describing report, byte-identical across --jobs") {
  const std::string base = "identify --train " + file("train.conll") + " --test " + file("test.conll") + kQuick;
  const auto a = run(base + " --jobs 1 --out " + path("id"));
  REQUIRE(a.code == 0);
  CHECK(a.output.find("verdict: ") != std::string::npos);
  CHECK(a.output.find("PureTrain-TestTrain") != std::string::npos);
  const auto json1 = read_file(scratch() / "id" / "report.json");
  const auto csv1 = read_file(scratch() / "id" / "curves.csv");
  const auto svg1 = read_file(scratch() / "id" / "curves.svg");
  REQUIRE(run(base + " --jobs 3 --out " + path("id")).code == 0);
  CHECK(read_file(scratch() / "id" / "report.json") == json1);
  CHECK(read_file(scratch() / "id" / "curves.csv") == csv1);
  CHECK(read_file(scratch() / "id" / "curves.svg") == svg1);

  const auto report = nlohmann::json::parse(json1);
  CHECK(report["run_config"]["x"] == 80);  // min(|test|, floor(240 / 3))
  CHECK(report["run_config"]["tool_version"] == report["tool_version"]);
  CHECK(report["run_config"].find("jobs") == report["run_config"].end());
  CHECK(svg1.find("<metadata>") != std::string::npos);

  REQUIRE(run("plot --report " + path("id/report.json") + " --out " + path("replot")).code == 0);
  CHECK(read_file(scratch() / "replot" / "curves.svg") == svg1);
}

TEST_CASE("config file values yield to flags") {
  const auto cfg = scratch() / "run.toml";
  labelaudit::write_file_atomic(cfg, "train = \"" + file("train.conll") + "\"\ntest = \"" + file("test.conll") +
                                         "\"\nseeds = [3]\ncheckpoints = 2\nepochs = 1\nx = 40\n");
  REQUIRE(run("identify --config " + cfg.string() + " --x 30 --out " + path("cfg")).code == 0);
  const auto rc = nlohmann::json::parse(read_file(scratch() / "cfg" / "report.json"))["run_config"];
  CHECK(rc["x"] == 30);
  CHECK(rc["seeds"] == nlohmann::json::array({3}));
  CHECK(rc["train_config"]["epochs"] == 1);

  labelaudit::write_file_atomic(cfg, "no_such_key = 1\n");
  CHECK(run("identify --config " + cfg.string()).code == 1);
}

TEST_CASE("identify errors") {
  const auto missing = run("identify --train " + file("train.conll") + " --test " + path("absent.conll") +
                           " --out " + path("missing"));
  CHECK(missing.code == 2);
  CHECK(!fs::exists(scratch() / "missing"));

  const auto big = run("identify --train " + file("train.conll") + " --test " + file("test.conll") +
                       " --x 81 --out " + path("big"));
  CHECK(big.code == 1);
  CHECK(big.output.find("largest feasible x is 80") != std::string::npos);
  CHECK(run("identify --test " + file("test.conll")).code == 1);
}

TEST_CASE("validate: eight curves per seed, degenerate z = 0, misalignment") {
  const std::string inputs = " --train " + file("train.conll") + " --test-good " + file("test_good.conll");
  const auto r = run("validate" + inputs + " --test-mistake " + file("test_mistake.conll") + " --test-corrected " +
                     file("test_corrected.conll") + kQuick + " --out " + path("val"));
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(read_file(scratch() / "val" / "report.json"));
  CHECK(report["curves"].size() == 16);
  CHECK(r.output.find("TestTrainCorrect-TestTrainMistake") != std::string::npos);

  labelaudit::write_file_atomic(scratch() / "empty.conll", "");
  const auto z0 = run("validate" + inputs + " --test-mistake " + path("empty.conll") + " --test-corrected " +
                      path("empty.conll") + kQuick + " --out " + path("z0"));
  REQUIRE(z0.code == 0);
  CHECK(z0.output.find("verdict: recovered") != std::string::npos);
  CHECK(z0.output.find("warning: validate: z = 0") != std::string::npos);

  // Corrected file shorter than the mistake file.
  const std::string corrected = read_file(file("test_corrected.conll"));
  const std::string truncated = corrected.substr(0, corrected.rfind("\n\n") + 1);
  labelaudit::write_file_atomic(scratch() / "short.conll", truncated);
  const auto shorter = run("validate" + inputs + " --test-mistake " + file("test_mistake.conll") +
                           " --test-corrected " + path("short.conll") + " --out " + path("short"));
  CHECK(shorter.code == 2);
  CHECK(!fs::exists(scratch() / "short"));

  // Same length, but the first sentence's first token differs.
  labelaudit::write_file_atomic(scratch() / "misaligned.conll", "Zzzz" + corrected.substr(corrected.find(' ')));
  const auto misaligned = run("validate" + inputs + " --test-mistake " + file("test_mistake.conll") +
                              " --test-corrected " + path("misaligned.conll") + " --out " + path("mis"));
  CHECK(misaligned.code == 2);
  CHECK(misaligned.output.find("at sentence 0") != std::string::npos);
}

TEST_CASE("eval overfits separable data and prints a P R F1 row") {
  const auto r = run("eval --train " + file("train.conll") + " --test " + file("train.conll") +
                     " --epochs 30 --out " + path("ev"));
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(read_file(scratch() / "ev" / "eval.json"));
  CHECK(summary["result"]["f1"].get<double>() > 0.98);
  CHECK(r.output.find("P R F1\n") != std::string::npos);
  CHECK(fs::exists(scratch() / "ev" / "model.json"));

  const auto again = run("eval --train " + file("train.conll") + " --test " + file("train.conll") +
                         " --epochs 30 --out " + path("ev2"));
  CHECK(again.output.substr(0, again.output.find("wrote")) == r.output.substr(0, r.output.find("wrote")));
  CHECK(read_file(scratch() / "ev2" / "model.json") == read_file(scratch() / "ev" / "model.json"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("").code == 1);
  CHECK(run("identify --no-such-flag").code == 1);
  CHECK(run("--help").code == 0);
}
