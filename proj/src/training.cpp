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

#include "sinedae/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "sinedae/checkpoint.hpp"
#include "sinedae/tape.hpp"

namespace sinedae {
namespace {

namespace fs = std::filesystem;

std::vector<Matrix*> MomentPtrs(std::vector<Matrix>& mats) {
  std::vector<Matrix*> out;
  out.reserve(mats.size());
  for (Matrix& m : mats) out.push_back(&m);
  return out;
}

std::string ParamNormDump(Model& model) {
  std::string out;
  char buf[96];
  for (const ParamRef& p : TrainableParams(model)) {
    double norm = 0.0;
    for (double v : p.value->data) norm += v * v;
    std::snprintf(buf, sizeof(buf), " |%s|=%.6g", p.name.c_str(), std::sqrt(norm));
    out += buf;
  }
  return out;
}

// Segment handle into a loaded track; slices are materialized on demand to
// keep the resident set small.
struct SegRef {
  int track = 0;
  int start = 0;
};

std::vector<double> Slice(const Waveform& w, int start, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = w.samples[start + i];
  return out;
}

double SliceMeanPowerDb(const Waveform& w, int start, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = w.samples[start + i];
    acc += v * v;
  }
  const double mean = acc / n;
  if (mean <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mean);
}

}  // namespace

void InitAdam(AdamState& state, Model& model) {
  state.step = 0;
  state.m.clear();
  state.v.clear();
  for (const ParamRef& p : TrainableParams(model)) {
    state.m.push_back(Matrix::Zeros(p.value->rows, p.value->cols));
    state.v.push_back(Matrix::Zeros(p.value->rows, p.value->cols));
  }
}

void AdamUpdate(Model& model, const std::vector<Matrix>& grads, AdamState& state, double lr) {
  const std::vector<ParamRef> params = TrainableParams(model);
  if (grads.size() != params.size() || state.m.size() != params.size()) {
    throw DimensionError("adam: gradient/state count mismatch");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& value = *params[p].value;
    Matrix& m = state.m[p];
    Matrix& v = state.v[p];
    const Matrix& g = grads[p];
    CheckSameShape(value, g, "adam");
    for (std::size_t i = 0; i < value.Size(); ++i) {
      m.data[i] = state.beta1 * m.data[i] + (1.0 - state.beta1) * g.data[i];
      v.data[i] = state.beta2 * v.data[i] + (1.0 - state.beta2) * g.data[i] * g.data[i];
      const double m_hat = m.data[i] / bc1;
      const double v_hat = v.data[i] / bc2;
      value.data[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

std::vector<double> CorruptGaussian(const std::vector<double>& x, double sigma, Rng& rng) {
  if (sigma < 0.0) throw ConfigError("noise sigma must be non-negative");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + sigma * rng.Normal();
  return out;
}

std::vector<double> CorruptMix(const std::vector<double>& vocals,
                               const std::vector<double>& accompaniment) {
  if (vocals.size() != accompaniment.size()) {
    throw DimensionError("corrupt_mix: length mismatch");
  }
  std::vector<double> out(vocals.size());
  for (std::size_t i = 0; i < vocals.size(); ++i) out[i] = vocals[i] + accompaniment[i];
  return out;
}

bool ShouldEarlyStop(const std::vector<double>& epoch_neg_snr) {
  if (epoch_neg_snr.size() < 2) throw StateError("early_stop needs >= 2 epochs");
  const std::size_t n = epoch_neg_snr.size();
  return epoch_neg_snr[n - 1] >= epoch_neg_snr[n - 2];
}

LossBreakdown TrainStep(Model& model, AdamState& adam, const std::vector<TrainItem>& batch,
                        const TrainConfig& cfg) {
  if (batch.empty()) throw DataError("train_step: empty batch");

  Tape tape;
  const ModelVars vars = RegisterParams(tape, model);
  const Tape::Var kernels = KernelsOnTape(tape, vars, model);

  Tape::Var total = -1;
  double neg_snr_sum = 0.0;
  double tv_sum = 0.0;
  for (const TrainItem& item : batch) {
    const int n = static_cast<int>(item.clean.size());
    const Tape::Var clean = tape.Constant(Matrix::RowVector(item.clean));
    const Tape::Var noisy = tape.Constant(Matrix::RowVector(item.noisy));
    const Tape::Var a_v = EncodeOnTape(tape, vars, model.hyper, noisy);
    const Tape::Var estimate = DecodeOnTape(tape, a_v, kernels, model.hyper.stride, n);
    Tape::Var loss = NegSnrOnTape(tape, clean, estimate);
    neg_snr_sum += tape.Value(loss).At(0, 0);

    if (cfg.lambda > 0.0) {
      Tape::Var a_reg = a_v;
      if (cfg.reg_target == RegTarget::kMix) {
        const Tape::Var mixed = tape.Constant(Matrix::RowVector(item.mixed));
        a_reg = EncodeOnTape(tape, vars, model.hyper, mixed);
      }
      const Tape::Var tv = TvLossOnTape(tape, a_reg);
      tv_sum += tape.Value(tv).At(0, 0);
      loss = tape.Add(loss, tape.Scale(tv, cfg.lambda));
    }
    total = total < 0 ? loss : tape.Add(total, loss);
  }
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  total = tape.Scale(total, inv_batch);

  LossBreakdown breakdown;
  breakdown.neg_snr = neg_snr_sum * inv_batch;
  breakdown.tv = tv_sum * inv_batch;
  breakdown.lambda = cfg.lambda;
  breakdown.total = tape.Value(total).At(0, 0);
  if (!std::isfinite(breakdown.total)) {
    throw NumericError("non-finite training loss; parameter norms:" + ParamNormDump(model));
  }

  tape.Backward(total);

  std::vector<Matrix> grads;
  grads.push_back(tape.GradOf(vars.conv1));
  grads.push_back(tape.GradOf(vars.conv2));
  switch (model.decoder) {
    case DecoderKind::kModCos:
      grads.push_back(tape.GradOf(vars.freq));
      grads.push_back(tape.GradOf(vars.phase));
      grads.push_back(tape.GradOf(vars.env));
      break;
    case DecoderKind::kCos:
      grads.push_back(tape.GradOf(vars.freq));
      grads.push_back(tape.GradOf(vars.phase));
      break;
    case DecoderKind::kConv:
      grads.push_back(tape.GradOf(vars.env));
      break;
  }

  AdamUpdate(model, grads, adam, cfg.lr);

  if (cfg.sorting) {
    const std::vector<int> perm = SortKernels(model, cfg.co_permute);
    PermuteAligned(model, perm, MomentPtrs(adam.m), cfg.co_permute);
    PermuteAligned(model, perm, MomentPtrs(adam.v), cfg.co_permute);
  }
  return breakdown;
}

TrainResult Train(const std::vector<TrackPair>& corpus, const TrainConfig& cfg,
                  const std::string& out_dir, std::ostream* progress) {
  if (corpus.empty()) throw DataError("training corpus is empty");
  for (const TrackPair& t : corpus) {
    if (static_cast<int>(t.vocals.Length()) < cfg.n) {
      throw DataError("track shorter than one segment: " + t.track_id);
    }
  }

  TrainResult result;
  result.model = InitModel(cfg.model, cfg.decoder, cfg.squared_freq, cfg.seed);
  AdamState adam;
  InitAdam(adam, result.model);

  // Segment tables. Silent vocal segments are dropped up front: the
  // reconstruction loss is undefined on a zero-energy reference.
  std::vector<std::vector<SegRef>> vocal_refs(corpus.size());
  std::vector<std::vector<SegRef>> acc_refs(corpus.size());
  for (std::size_t t = 0; t < corpus.size(); ++t) {
    const int len = static_cast<int>(corpus[t].vocals.Length());
    for (int start = 0; start + cfg.n <= len; start += cfg.hop) {
      if (SliceMeanPowerDb(corpus[t].vocals, start, cfg.n) >= cfg.silence_db) {
        vocal_refs[t].push_back({static_cast<int>(t), start});
      }
      acc_refs[t].push_back({static_cast<int>(t), start});
    }
  }

  std::ofstream log;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    log.open(fs::path(out_dir) / "train_log.jsonl", std::ios::trunc);
    if (!log) throw IoError("cannot open training log under: " + out_dir);
  }

  const auto run_start = std::chrono::steady_clock::now();
  double best_total = std::numeric_limits<double>::infinity();
  long step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng epoch_rng(MixSeed(cfg.seed, 0xe70cULL, static_cast<std::uint64_t>(epoch)));
    std::vector<int> track_order(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) track_order[i] = static_cast<int>(i);
    epoch_rng.Shuffle(track_order);

    double epoch_neg_snr_sum = 0.0;
    double epoch_total_sum = 0.0;
    long epoch_steps = 0;
    std::uint64_t item_counter = 0;

    for (std::size_t g = 0; g < track_order.size(); g += static_cast<std::size_t>(cfg.group_tracks)) {
      // accompaniment pool: all segments of the sampled track group
      std::vector<SegRef> vocals;
      std::vector<SegRef> accs;
      const std::size_t g_end =
          std::min(track_order.size(), g + static_cast<std::size_t>(cfg.group_tracks));
      for (std::size_t i = g; i < g_end; ++i) {
        const int t = track_order[i];
        vocals.insert(vocals.end(), vocal_refs[t].begin(), vocal_refs[t].end());
        accs.insert(accs.end(), acc_refs[t].begin(), acc_refs[t].end());
      }
      if (vocals.empty() || accs.empty()) continue;
      epoch_rng.Shuffle(vocals);
      epoch_rng.Shuffle(accs);

      std::size_t acc_pos = 0;
      for (std::size_t b = 0; b < vocals.size(); b += static_cast<std::size_t>(cfg.batch)) {
        const std::size_t b_end =
            std::min(vocals.size(), b + static_cast<std::size_t>(cfg.batch));
        std::vector<TrainItem> batch;
        batch.reserve(b_end - b);
        for (std::size_t i = b; i < b_end; ++i) {
          if (acc_pos >= accs.size()) {  // pool exhausted: reshuffle and wrap
            epoch_rng.Shuffle(accs);
            acc_pos = 0;
          }
          const SegRef vref = vocals[i];
          const SegRef aref = accs[acc_pos++];
          TrainItem item;
          item.clean = Slice(corpus[vref.track].vocals, vref.start, cfg.n);
          Rng noise_rng(MixSeed(cfg.seed, 0x6e01ULL, static_cast<std::uint64_t>(epoch),
                                item_counter++));
          item.noisy = CorruptGaussian(item.clean, cfg.noise_std, noise_rng);
          item.mixed =
              CorruptMix(item.clean, Slice(corpus[aref.track].accompaniment, aref.start, cfg.n));
          batch.push_back(std::move(item));
        }

        const auto step_start = std::chrono::steady_clock::now();
        const LossBreakdown lb = TrainStep(result.model, adam, batch, cfg);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                      step_start)
                .count();
        ++step;
        ++epoch_steps;
        epoch_neg_snr_sum += lb.neg_snr;
        epoch_total_sum += lb.total;
        if (log.is_open()) {
          char line[256];
          std::snprintf(line, sizeof(line),
                        "{\"step\":%ld,\"epoch\":%d,\"neg_snr\":%.17g,\"tv\":%.17g,"
                        "\"total\":%.17g,\"wall_ms\":%.3f}\n",
                        step, epoch, lb.neg_snr, lb.tv, lb.total, wall_ms);
          log << line;
        }
      }
    }

    if (epoch_steps == 0) throw DataError("no non-silent vocal segments to train on");
    result.epoch_neg_snr.push_back(epoch_neg_snr_sum / static_cast<double>(epoch_steps));
    result.epoch_total.push_back(epoch_total_sum / static_cast<double>(epoch_steps));
    result.epochs_run = epoch + 1;

    if (progress != nullptr) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
      char line[160];
      std::snprintf(line, sizeof(line),
                    "epoch %d/%d  neg_snr %.2f dB  total %.2f  (%ld steps, %.1f s)\n", epoch + 1,
                    cfg.epochs, result.epoch_neg_snr.back(), result.epoch_total.back(), step,
                    elapsed);
      *progress << line << std::flush;
    }

    if (!out_dir.empty()) {
      CheckpointMeta meta;
      meta.config = cfg;
      meta.epoch = epoch + 1;
      meta.neg_snr_history = result.epoch_neg_snr;
      meta.total_history = result.epoch_total;
      char name[48];
      std::snprintf(name, sizeof(name), "checkpoint_epoch%d.ckpt", epoch + 1);
      SaveCheckpoint((fs::path(out_dir) / name).string(), result.model, meta);
      if (result.epoch_total.back() < best_total) {
        best_total = result.epoch_total.back();
        result.best_path = (fs::path(out_dir) / "checkpoint_best.ckpt").string();
        SaveCheckpoint(result.best_path, result.model, meta);
      }
    }

    if (cfg.early_stop && result.epoch_neg_snr.size() >= 2 &&
        ShouldEarlyStop(result.epoch_neg_snr)) {
      break;
    }
  }

  result.steps = step;
  if (!out_dir.empty()) {
    CheckpointMeta meta;
    meta.config = cfg;
    meta.epoch = result.epochs_run;
    meta.neg_snr_history = result.epoch_neg_snr;
    meta.total_history = result.epoch_total;
    result.last_path = (fs::path(out_dir) / "checkpoint_last.ckpt").string();
    SaveCheckpoint(result.last_path, result.model, meta);
  }
  return result;
}

}  // namespace sinedae
