// Copyright 2026 The sinedae Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sinedae/audio_io.hpp"
#include "sinedae/common.hpp"
#include "sinedae/evaluate.hpp"

using namespace sinedae;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd = std::string(SINEDAE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) r.output += buf;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const fs::path kRoot = "cli_scratch";

void WriteTinyConfig(const fs::path& path, std::uint64_t seed) {
  std::ofstream out(path, std::ios::trunc);
  out << R"({
  "n": 2048, "hop": 1024, "batch": 2, "epochs": 1, "lr": 0.001,
  "lambda": 0.5, "noise_std": 0.0001, "reg_target": "A_m",
  "seed": )" << seed
      << R"(,
  "model": {"channels": 4, "kernel_len": 32, "dilated_len": 3, "stride": 8, "dilation": 2}
})";
}

}  // namespace

TEST_CASE("help output documents every command and shared flag") {
  const RunResult top = RunCli("--help");
  CHECK(top.exit_code == 0);
  for (const char* cmd :
       {"synth-data", "train", "evaluate", "separate", "export-repr", "gradcheck"}) {
    CHECK(top.output.find(cmd) != std::string::npos);
  }

  struct CommandFlags {
    const char* name;
    std::vector<const char*> flags;
  };
  const CommandFlags cases[] = {
      {"synth-data", {"--out", "--tracks", "--train-split", "--duration"}},
      {"train", {"--data-dir", "--out-dir", "--epochs"}},
      {"evaluate", {"--checkpoint", "--test-dir", "--out-dir", "--runs", "--segment-len"}},
      {"separate", {"--checkpoint", "--vocals", "--accompaniment", "--out"}},
      {"export-repr", {"--checkpoint", "--input", "--out"}},
      {"gradcheck", {}},
  };
  for (const CommandFlags& c : cases) {
    const RunResult help = RunCli(std::string(c.name) + " --help");
    CHECK(help.exit_code == 0);
    for (const char* flag : c.flags) {
      INFO(c.name, " ", flag);
      CHECK(help.output.find(flag) != std::string::npos);
    }
    // every command honors --seed and --config
    CHECK(help.output.find("--seed") != std::string::npos);
    CHECK(help.output.find("--config") != std::string::npos);
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(RunCli("").exit_code == 2);                          // missing subcommand
  CHECK(RunCli("train --no-such-flag").exit_code == 2);      // unknown flag
  CHECK(RunCli("nonsense-command").exit_code == 2);

  fs::create_directories(kRoot);
  std::ofstream bad(kRoot / "bad_config.json");
  bad << R"({"unknown_key": 1})";
  bad.close();
  const RunResult r =
      RunCli("gradcheck --config " + (kRoot / "bad_config.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("unknown") != std::string::npos);
}

TEST_CASE("end-to-end workflow: synth-data, train, evaluate, separate, export-repr") {
  fs::remove_all(kRoot);
  fs::create_directories(kRoot);
  WriteTinyConfig(kRoot / "config.json", 77);

  const RunResult synth = RunCli("synth-data --out " + (kRoot / "corpus").string() +
                                 " --tracks 3 --train-split 2 --duration 1 --seed 5");
  CHECK(synth.exit_code == 0);
  CHECK(fs::exists(kRoot / "corpus/train/track01/vocals.wav"));
  CHECK(fs::exists(kRoot / "corpus/train/track02/accompaniment.wav"));
  CHECK(fs::exists(kRoot / "corpus/test/track03/vocals.wav"));

  const RunResult train = RunCli("train --data-dir " + (kRoot / "corpus/train").string() +
                                 " --out-dir " + (kRoot / "run").string() + " --config " +
                                 (kRoot / "config.json").string());
  REQUIRE(train.exit_code == 0);
  const fs::path ckpt = kRoot / "run/checkpoint_last.ckpt";
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(kRoot / "run/checkpoint_epoch1.ckpt"));
  CHECK(fs::exists(kRoot / "run/checkpoint_best.ckpt"));
  CHECK(fs::exists(kRoot / "run/train_log.jsonl"));

  const RunResult eval = RunCli("evaluate --checkpoint " + ckpt.string() + " --test-dir " +
                                (kRoot / "corpus/test").string() + " --out-dir " +
                                (kRoot / "report").string() + " --segment-len 2048 --runs 1");
  REQUIRE(eval.exit_code == 0);
  CHECK(fs::exists(kRoot / "report/summary.json"));
  CHECK(fs::exists(kRoot / "report/reconstruction.csv"));
  CHECK(fs::exists(kRoot / "report/masked_separation.csv"));
  CHECK(fs::exists(kRoot / "report/stft_baseline.csv"));
  CHECK(eval.output.find("config_hash") != std::string::npos);

  // separate: output duration equals input duration
  const std::string voc = (kRoot / "corpus/test/track03/vocals.wav").string();
  const std::string acc = (kRoot / "corpus/test/track03/accompaniment.wav").string();
  const std::string est_path = (kRoot / "estimate.wav").string();
  const RunResult sep = RunCli("separate --checkpoint " + ckpt.string() + " --vocals " + voc +
                               " --accompaniment " + acc + " --out " + est_path);
  REQUIRE(sep.exit_code == 0);
  CHECK(sep.output.find("SI-SDR") != std::string::npos);
  CHECK(ReadWav(est_path).Length() == ReadWav(voc).Length());

  const RunResult repr = RunCli("export-repr --checkpoint " + ckpt.string() + " --input " + voc +
                                " --out " + (kRoot / "voc.repr").string());
  REQUIRE(repr.exit_code == 0);
  const Matrix a = ReadRepresentation((kRoot / "voc.repr").string());
  CHECK(a.rows == 4);  // channels from the tiny config
  CHECK(a.cols > 0);

  // mismatched stem lengths exit non-zero
  Waveform shorter = ReadWav(voc);
  shorter.samples.resize(shorter.samples.size() / 2);
  WriteWav((kRoot / "short.wav").string(), shorter, WavBits::kFloat32);
  const RunResult bad = RunCli("separate --checkpoint " + ckpt.string() + " --vocals " +
                               (kRoot / "short.wav").string() + " --accompaniment " + acc +
                               " --out " + (kRoot / "bad.wav").string());
  CHECK(bad.exit_code == 3);
}

TEST_CASE("missing checkpoint fails cleanly without partial output") {
  fs::create_directories(kRoot);
  const fs::path out = kRoot / "no_report";
  fs::remove_all(out);
  const RunResult r = RunCli("evaluate --checkpoint " + (kRoot / "missing.ckpt").string() +
                             " --test-dir " + (kRoot / "corpus/test").string() + " --out-dir " +
                             out.string());
  CHECK(r.exit_code == 3);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("gradcheck command passes on the tiny configuration") {
  const RunResult r = RunCli("gradcheck --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
}
