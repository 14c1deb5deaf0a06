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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sinedae/checkpoint.hpp"
#include "sinedae/common.hpp"
#include "sinedae/corpus.hpp"
#include "sinedae/evaluate.hpp"
#include "sinedae/metrics.hpp"
#include "sinedae/synth_data.hpp"
#include "sinedae/training.hpp"
#include "sinedae/verification.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sinedae;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

void AddCommon(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file (training schema)");
  cmd->add_option("--seed", args.seed, "RNG seed override");
}

TrainConfig ResolveConfig(const CommonArgs& args) {
  TrainConfig cfg;
  if (!args.config_path.empty()) cfg = LoadConfigFile(args.config_path);
  if (args.seed.has_value()) cfg.seed = *args.seed;
  return cfg;
}

std::vector<double> ToDouble(const std::vector<float>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  return out;
}

int RunSynthData(const CommonArgs& common, const std::string& out_dir, int tracks,
                 int train_split, double duration) {
  const TrainConfig cfg = ResolveConfig(common);
  SynthSpec spec;
  spec.tracks = tracks;
  spec.train_split = train_split;
  spec.duration_s = duration;
  spec.seed = cfg.seed;
  GenerateCorpus(out_dir, spec);
  std::printf("wrote %d train and %d test tracks under %s\n", spec.train_split,
              spec.tracks - spec.train_split, out_dir.c_str());
  return 0;
}

int RunTrain(const CommonArgs& common, const std::string& data_dir, const std::string& out_dir,
             std::optional<int> epochs) {
  TrainConfig cfg = ResolveConfig(common);
  if (epochs.has_value()) cfg.epochs = *epochs;
  const std::vector<TrackPair> corpus = LoadCorpus(data_dir);
  const TrainResult result = Train(corpus, cfg, out_dir, &std::cout);
  std::printf("done: %d epochs, %ld steps, final neg-SNR %.2f dB\n", result.epochs_run,
              result.steps, result.epoch_neg_snr.back());
  std::printf("checkpoint: %s (hash %s)\n", result.last_path.c_str(),
              ToHex(HashFile(result.last_path)).c_str());
  return 0;
}

int RunEvaluate(const CommonArgs& common, const std::vector<std::string>& checkpoints,
                const std::string& test_dir, const std::string& out_dir,
                std::optional<int> runs, std::optional<int> segment_len) {
  if (runs.has_value() && *runs != static_cast<int>(checkpoints.size())) {
    throw ConfigError("--runs must match the number of --checkpoint options (one run per "
                      "trained checkpoint)");
  }
  // Load everything before creating any output so failures leave no files.
  std::vector<Model> models;
  std::vector<CheckpointMeta> metas;
  for (const std::string& path : checkpoints) {
    CheckpointMeta meta;
    models.push_back(LoadCheckpoint(path, &meta));
    metas.push_back(meta);
  }
  const std::vector<TrackPair> corpus = LoadCorpus(test_dir);

  EvalOptions opts;
  const TrainConfig cfg = ResolveConfig(common);
  opts.segment_len = segment_len.value_or(cfg.n);
  opts.silence_db = cfg.silence_db;

  std::vector<EvalRun> eval_runs;
  for (std::size_t r = 0; r < models.size(); ++r) {
    eval_runs.push_back(EvaluateRun(corpus, models[r], opts, static_cast<int>(r)));
  }
  const std::string summary =
      WriteEvalReport(out_dir, eval_runs, metas.front().config_hash, opts);
  std::printf("%s\n", summary.c_str());
  return 0;
}

int RunSeparate(const CommonArgs& common, const std::string& checkpoint,
                const std::string& vocals_path, const std::string& acc_path,
                const std::string& out_path) {
  CheckpointMeta meta;
  const Model model = LoadCheckpoint(checkpoint, &meta);
  const Waveform vocals = ReadWav(vocals_path);
  const Waveform acc = ReadWav(acc_path);
  if (vocals.Length() != acc.Length()) {
    throw DataError("stem length mismatch: vocals has " + std::to_string(vocals.Length()) +
                    " samples, accompaniment has " + std::to_string(acc.Length()));
  }
  const int n = meta.config.n;
  const SegmentSet voc_segs = Segment(vocals, n, n, true, SourceTag::kVocals);
  const SegmentSet acc_segs = Segment(acc, n, n, true, SourceTag::kAccompaniment);

  std::vector<double> estimate;
  estimate.reserve(vocals.Length());
  for (std::size_t s = 0; s < voc_segs.segments.size(); ++s) {
    const std::vector<double> v = ToDouble(voc_segs.segments[s].samples);
    const std::vector<double> a = ToDouble(acc_segs.segments[s].samples);
    const Matrix mix = Matrix::RowVector(CorruptMix(v, a));
    const Matrix a_v = Encode(model, Matrix::RowVector(v));
    const Matrix a_acc = Encode(model, Matrix::RowVector(a));
    const Matrix est = Separate(model, mix, a_v, a_acc);
    estimate.insert(estimate.end(), est.data.begin(), est.data.end());
  }
  estimate.resize(vocals.Length());  // drop the zero-padded tail

  Waveform out;
  out.sample_rate = vocals.sample_rate;
  out.samples.assign(estimate.begin(), estimate.end());
  WriteWav(out_path, out, WavBits::kFloat32);

  const double score = SiSdr(ToDouble(vocals.samples), estimate);
  std::printf("SI-SDR vs clean vocals: %.2f dB\n", score);
  std::printf("si_sdr_db=%.17g\n", score);
  return 0;
}

int RunExportRepr(const std::string& checkpoint, const std::string& input_path,
                  const std::string& out_path) {
  const Model model = LoadCheckpoint(checkpoint);
  const Waveform w = ReadWav(input_path);
  if (w.samples.empty()) throw DataError("empty input waveform: " + input_path);
  const Matrix a = Encode(model, Matrix::RowVector(ToDouble(w.samples)));
  WriteRepresentation(out_path, a);
  std::printf("wrote %dx%d representation to %s\n", a.rows, a.cols, out_path.c_str());
  return 0;
}

int RunGradcheck(const CommonArgs& common) {
  const TrainConfig cfg = ResolveConfig(common);
  ModelHyper tiny;
  tiny.channels = 8;
  tiny.kernel_len = 32;
  tiny.dilated_len = 3;
  tiny.stride = 8;
  tiny.dilation = 2;
  const std::vector<GradCheckReport> reports =
      FullModelGradCheck(tiny, 256, cfg.seed, 1e-5, 1e-4);
  const char* names[] = {"mod-cos/f^2", "mod-cos", "cos/f^2", "cos", "conv"};
  bool all_pass = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const GradCheckEntry& e : reports[i].entries) {
      std::printf("%-12s %-8s max_rel_err %.3e  %s\n", names[i], e.name.c_str(), e.max_rel_err,
                  e.pass ? "ok" : "FAIL");
      all_pass = all_pass && e.pass;
    }
  }
  std::printf("gradcheck: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  ApplyThreadCapFromEnv();

  CLI::App app{"unsupervised sinusoidal-dictionary representations of singing voice, with "
               "informed binary-mask separation"};
  app.require_subcommand(1);

  CommonArgs synth_common, train_common, eval_common, sep_common, repr_common, grad_common;

  auto* synth = app.add_subcommand("synth-data", "generate a paired synthetic stem corpus");
  std::string synth_out;
  int synth_tracks = 20;
  int synth_split = 16;
  double synth_duration = 10.0;
  synth->add_option("--out", synth_out, "output corpus directory")->required();
  synth->add_option("--tracks", synth_tracks, "total track count");
  synth->add_option("--train-split", synth_split, "tracks placed under train/");
  synth->add_option("--duration", synth_duration, "track duration in seconds");
  AddCommon(synth, synth_common);

  auto* train = app.add_subcommand("train", "train a model on <track>/{vocals,accompaniment}.wav pairs");
  std::string train_data, train_out;
  std::optional<int> train_epochs;
  train->add_option("--data-dir", train_data, "training corpus directory")->required();
  train->add_option("--out-dir", train_out, "checkpoint/log output directory")->required();
  train->add_option("--epochs", train_epochs, "override epoch count");
  AddCommon(train, train_common);

  auto* eval = app.add_subcommand("evaluate", "informed separation evaluation with STFT baseline");
  std::vector<std::string> eval_ckpts;
  std::string eval_test, eval_out;
  std::optional<int> eval_runs, eval_seglen;
  eval->add_option("--checkpoint", eval_ckpts, "trained checkpoint (repeat for pooled runs)")
      ->required();
  eval->add_option("--test-dir", eval_test, "evaluation corpus directory")->required();
  eval->add_option("--out-dir", eval_out, "report output directory")->required();
  eval->add_option("--runs", eval_runs, "expected run count (must equal checkpoint count)");
  eval->add_option("--segment-len", eval_seglen, "evaluation segment length in samples");
  AddCommon(eval, eval_common);

  auto* sep = app.add_subcommand("separate", "binary-mask separation of one stem pair");
  std::string sep_ckpt, sep_voc, sep_acc, sep_out;
  sep->add_option("--checkpoint", sep_ckpt, "trained checkpoint")->required();
  sep->add_option("--vocals", sep_voc, "clean vocal stem WAV")->required();
  sep->add_option("--accompaniment", sep_acc, "accompaniment stem WAV")->required();
  sep->add_option("--out", sep_out, "estimated vocal WAV path")->required();
  AddCommon(sep, sep_common);

  auto* repr = app.add_subcommand("export-repr", "encode a WAV and dump the representation matrix");
  std::string repr_ckpt, repr_in, repr_out;
  repr->add_option("--checkpoint", repr_ckpt, "trained checkpoint")->required();
  repr->add_option("--input", repr_in, "input WAV")->required();
  repr->add_option("--out", repr_out, "output .repr path")->required();
  AddCommon(repr, repr_common);

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of the full objective");
  AddCommon(grad, grad_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      return RunSynthData(synth_common, synth_out, synth_tracks, synth_split, synth_duration);
    }
    if (train->parsed()) return RunTrain(train_common, train_data, train_out, train_epochs);
    if (eval->parsed()) {
      return RunEvaluate(eval_common, eval_ckpts, eval_test, eval_out, eval_runs, eval_seglen);
    }
    if (sep->parsed()) return RunSeparate(sep_common, sep_ckpt, sep_voc, sep_acc, sep_out);
    if (repr->parsed()) return RunExportRepr(repr_ckpt, repr_in, repr_out);
    if (grad->parsed()) return RunGradcheck(grad_common);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return 0;
}
