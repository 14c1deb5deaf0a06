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
//
// End-to-end acceptance suite. Each test prints one PASS/FAIL line.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sinedae/common.hpp"
#include "sinedae/evaluate.hpp"
#include "sinedae/kernels.hpp"
#include "sinedae/losses.hpp"
#include "sinedae/metrics.hpp"
#include "sinedae/reference.hpp"
#include "sinedae/rng.hpp"
#include "sinedae/stft.hpp"
#include "sinedae/synth_data.hpp"
#include "sinedae/training.hpp"
#include "sinedae/verification.hpp"

using namespace sinedae;

namespace {

namespace fs = std::filesystem;

class Criterion {
 public:
  Criterion(int number, const char* name) : number_(number), name_(name) {
    start_ = std::chrono::steady_clock::now();
  }
  void Expect(bool cond, const char* what) {
    ok_ = ok_ && cond;
    CHECK_MESSAGE(cond, what);
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("[%s] criterion %d: %s (%.1f s)\n", ok_ ? "PASS" : "FAIL", number_, name_, secs);
    std::fflush(stdout);
  }

 private:
  int number_;
  const char* name_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point start_;
};

Matrix RandomMatrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.Uniform(-1.0, 1.0);
  return m;
}

ModelHyper TinyHyper() {
  ModelHyper h;
  h.channels = 8;
  h.kernel_len = 32;
  h.dilated_len = 3;
  h.stride = 8;
  h.dilation = 2;
  return h;
}

// ---------------------------------------------------------------------------
// Desk-scale runs shared by criteria 7-9: a reduced model trained on the
// synthetic corpus, plus the squaring-off and lambda=0 ablations and an
// identical-seed repeat.
// ---------------------------------------------------------------------------

constexpr std::uint64_t kCorpusSeed = 20260810;
constexpr std::uint64_t kTrainSeed = 11;

TrainConfig DeskConfig() {
  TrainConfig cfg;
  cfg.model.channels = 64;
  cfg.model.kernel_len = 512;
  cfg.model.stride = 128;
  cfg.model.dilated_len = 5;
  cfg.model.dilation = 10;
  cfg.n = 22050;
  cfg.hop = 11025;
  cfg.batch = 8;
  cfg.epochs = 8;
  cfg.lr = 2e-3;
  cfg.lambda = 0.5;
  cfg.noise_std = 1e-4;
  cfg.reg_target = RegTarget::kMix;
  cfg.seed = kTrainSeed;
  cfg.decoder = DecoderKind::kModCos;
  cfg.squared_freq = true;
  cfg.sorting = true;
  cfg.early_stop = true;
  return cfg;
}

struct DeskRuns {
  fs::path root{"acceptance_scratch"};
  std::vector<TrackPair> train_corpus;
  std::vector<TrackPair> test_corpus;
  TrainResult primary;
  TrainResult squaring_off;
  TrainResult lambda_zero;
  TrainResult repeat;
  EvalRun eval_primary;
  EvalRun eval_squaring_off;
  EvalRun eval_lambda_zero;
  EvalRun eval_repeat;
  double train_secs = 0.0;
};

EvalOptions DeskEvalOptions() {
  EvalOptions opts;
  opts.segment_len = 44100;
  return opts;
}

const DeskRuns& Desk() {
  static const DeskRuns desk = [] {
    DeskRuns d;
    fs::remove_all(d.root);
    fs::create_directories(d.root);

    SynthSpec spec;
    spec.tracks = 20;
    spec.duration_s = 10.0;
    spec.train_split = 16;
    spec.seed = kCorpusSeed;
    GenerateCorpus((d.root / "corpus").string(), spec);
    d.train_corpus = LoadCorpus((d.root / "corpus" / "train").string());
    d.test_corpus = LoadCorpus((d.root / "corpus" / "test").string());

    const auto t0 = std::chrono::steady_clock::now();
    const TrainConfig base = DeskConfig();

    TrainConfig no_squaring = base;
    no_squaring.squared_freq = false;

    TrainConfig no_tv = base;
    no_tv.lambda = 0.0;

    d.primary = Train(d.train_corpus, base, (d.root / "run_primary").string(), nullptr);
    d.squaring_off =
        Train(d.train_corpus, no_squaring, (d.root / "run_squaring_off").string(), nullptr);
    d.lambda_zero = Train(d.train_corpus, no_tv, (d.root / "run_lambda0").string(), nullptr);
    d.repeat = Train(d.train_corpus, base, (d.root / "run_repeat").string(), nullptr);
    d.train_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const EvalOptions opts = DeskEvalOptions();
    d.eval_primary = EvaluateRun(d.test_corpus, d.primary.model, opts, 0);
    d.eval_squaring_off = EvaluateRun(d.test_corpus, d.squaring_off.model, opts, 0);
    d.eval_lambda_zero = EvaluateRun(d.test_corpus, d.lambda_zero.model, opts, 0);
    d.eval_repeat = EvaluateRun(d.test_corpus, d.repeat.model, opts, 0);
    return d;
  }();
  return desk;
}

double MedianOf(const EvalRun& run, double SegmentRecord::*field) {
  std::vector<double> values;
  for (const SegmentRecord& r : run.rows) {
    if (std::isfinite(r.*field)) values.push_back(r.*field);
  }
  return Median(values);
}

std::string FileBytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("criterion 1: gradient correctness of the full objective") {
  Criterion c(1, "gradcheck of the full objective, all decoder variants");
  const auto reports = FullModelGradCheck(TinyHyper(), 256, 2026, 1e-5, 1e-4);
  c.Expect(reports.size() == 5, "five variant/squaring combinations checked");
  for (const GradCheckReport& report : reports) {
    for (const GradCheckEntry& e : report.entries) {
      INFO(e.name, " max_rel_err=", e.max_rel_err);
      c.Expect(e.pass, "per-parameter max relative error <= 1e-4");
    }
  }
}

TEST_CASE("criterion 2: convolution kernels match brute-force oracles") {
  Criterion c(2, "strided/dilated/transposed convs vs direct-sum oracles");
  Rng rng(2026);
  int instances = 0;
  while (instances < 120) {
    const int cin = static_cast<int>(rng.UniformInt(1, 3));
    const int cout = static_cast<int>(rng.UniformInt(1, 4));
    const int n = static_cast<int>(rng.UniformInt(4, 64));
    const int klen = static_cast<int>(rng.UniformInt(1, std::min(12, n)));
    const int stride = static_cast<int>(rng.UniformInt(1, 4));
    const int dilation = static_cast<int>(rng.UniformInt(1, 4));
    const int pad = rng.Uniform() < 0.5 ? 0 : ref::SamePadLeft(n, klen, stride);
    const Matrix input = RandomMatrix(cin, n, rng);
    const Matrix kernels = RandomMatrix(cout, cin * klen, rng);

    c.Expect(kern::Conv1dStrided(input, kernels, stride, pad)
                     .MaxAbsDiff(ref::Conv1dStrided(input, kernels, stride, pad)) <= 1e-12,
             "strided conv within 1e-12 of oracle");
    c.Expect(kern::Conv1dDilated(input, kernels, dilation)
                     .MaxAbsDiff(ref::Conv1dDilated(input, kernels, dilation)) <= 1e-12,
             "dilated conv within 1e-12 of oracle");

    const int frames = static_cast<int>(rng.UniformInt(1, 8));
    const int out_len = static_cast<int>(rng.UniformInt(klen, 64));
    const Matrix acts = RandomMatrix(cout, frames, rng);
    const Matrix tk = RandomMatrix(cout, klen, rng);
    c.Expect(kern::TransposedConv1d(acts, tk, stride, out_len)
                     .MaxAbsDiff(ref::TransposedConv1d(acts, tk, stride, out_len)) <= 1e-12,
             "transposed conv within 1e-12 of oracle");
    instances += 3;
  }
}

TEST_CASE("criterion 3: encode shape law and non-negativity") {
  Criterion c(3, "encode emits C x ceil(N/S) with min >= 0 over 50 random (N, S)");
  Rng rng(33);
  for (int rep = 0; rep < 50; ++rep) {
    ModelHyper h = TinyHyper();
    h.stride = static_cast<int>(rng.UniformInt(1, 16));
    const int n = static_cast<int>(rng.UniformInt(h.kernel_len, 400));
    const Model model = InitModel(h, DecoderKind::kModCos, true, rep);
    const Matrix x = RandomMatrix(1, n, rng);
    const Matrix a = Encode(model, x);
    c.Expect(a.rows == h.channels, "C rows");
    c.Expect(a.cols == (n + h.stride - 1) / h.stride, "ceil(N/S) columns");
    double min_v = 0.0;
    for (double v : a.data) min_v = std::min(min_v, v);
    c.Expect(min_v >= 0.0, "non-negative representation");
  }
}

TEST_CASE("criterion 4: kernel bank analytics and function-preserving sort") {
  Criterion c(4, "kernel re-parameterization examples and sort invariance");
  ModelHyper h = TinyHyper();
  h.channels = 1;
  h.kernel_len = 8;
  Model m = InitModel(h, DecoderKind::kModCos, true, 4);
  for (double& v : m.env.data) v = 1.0;
  m.freq.At(0, 0) = 0.0;
  m.phase.At(0, 0) = 0.0;
  Matrix w = BuildKernels(m);
  bool ones_ok = true;
  for (double v : w.data) ones_ok = ones_ok && std::fabs(v - 1.0) <= 1e-12;
  c.Expect(ones_ok, "zero frequency gives the all-ones kernel");

  m.freq.At(0, 0) = 0.5;  // f^2 = 0.25
  w = BuildKernels(m);
  const double quarter[] = {1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0};
  bool quarter_ok = true;
  for (int i = 0; i < 8; ++i) quarter_ok = quarter_ok && std::fabs(w.At(0, i) - quarter[i]) <= 1e-12;
  c.Expect(quarter_ok, "quarter-cycle kernel [1,0,-1,0,...]");

  Rng rng(44);
  Model full = InitModel(TinyHyper(), DecoderKind::kModCos, true, 5);
  rng.Shuffle(full.freq.data);
  const Matrix x = RandomMatrix(1, 200, rng);
  const Matrix before = Decode(full, Encode(full, x), x.cols);
  SortKernels(full);
  const Matrix after = Decode(full, Encode(full, x), x.cols);
  double prev = -1.0;
  bool sorted = true;
  for (int ch = 0; ch < full.Channels(); ++ch) {
    const double f2 = full.freq.At(ch, 0) * full.freq.At(ch, 0);
    sorted = sorted && f2 >= prev;
    prev = f2;
  }
  c.Expect(sorted, "squared frequencies non-decreasing after sort");
  c.Expect(before.MaxAbsDiff(after) <= 1e-9, "end-to-end map preserved within 1e-9");
}

TEST_CASE("criterion 5: metric correctness") {
  Criterion c(5, "TV hand case, SI-SDR scale invariance, neg-SNR zero estimate");
  c.Expect(TvLoss(Matrix(2, 2, {0.0, 1.0, 1.0, 0.0})) == 1.0, "2x2 TV hand case equals 1.0");

  Rng rng(55);
  bool scale_ok = true;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = static_cast<int>(rng.UniformInt(4, 64));
    std::vector<double> ref(n), est(n), scaled(n);
    for (int i = 0; i < n; ++i) {
      ref[i] = rng.Uniform(-1.0, 1.0);
      est[i] = rng.Uniform(-1.0, 1.0);
    }
    const double beta = rng.Uniform(0.01, 100.0);
    for (int i = 0; i < n; ++i) scaled[i] = beta * est[i];
    scale_ok = scale_ok && std::fabs(SiSdr(ref, est) - SiSdr(ref, scaled)) <= 1e-9;
  }
  c.Expect(scale_ok, "SI-SDR invariant to positive estimate scaling");

  Matrix ref_m(1, 8);
  Rng rng2(56);
  for (double& v : ref_m.data) v = rng2.Uniform(-1.0, 1.0);
  c.Expect(std::fabs(NegSnr(ref_m, Matrix(1, 8))) <= 1e-9, "neg_snr(x, 0) = 0 dB");
}

TEST_CASE("criterion 6: STFT round-trip and ideal-binary-mask baseline") {
  Criterion c(6, "STFT interior round-trip >= 50 dB; disjoint tones >= 30 dB");
  StftConfig cfg;  // window 2048, hop 384, hamming
  Rng rng(66);
  std::vector<double> x(44100);
  for (double& v : x) v = rng.Uniform(-1.0, 1.0);
  const std::vector<double> back = InverseStft(ComputeStft(x, cfg));
  std::vector<double> xi(x.begin() + cfg.window, x.end() - cfg.window);
  std::vector<double> bi(back.begin() + cfg.window, back.end() - cfg.window);
  c.Expect(SiSdr(xi, bi) >= 50.0, "interior round-trip SI-SDR >= 50 dB");

  const int sr = 44100;
  std::vector<double> vocal(sr), acc(sr);
  for (int i = 0; i < sr; ++i) {
    vocal[i] = 0.7 * std::sin(2.0 * M_PI * 200.0 * i / sr);
    acc[i] = 0.7 * std::sin(2.0 * M_PI * 5000.0 * i / sr);
  }
  const std::vector<double> est = StftMaskBaseline(vocal, acc, cfg);
  std::vector<double> vi(vocal.begin() + cfg.window, vocal.end() - cfg.window);
  std::vector<double> ei(est.begin() + cfg.window, est.end() - cfg.window);
  c.Expect(SiSdr(vi, ei) >= 30.0, "binary-mask separation of disjoint tones >= 30 dB");
}

TEST_CASE("criterion 7: desk-scale training reaches 15 dB and squaring helps") {
  Criterion c(7, "median autoencoding SI-SDR >= 15 dB; squaring-off strictly lower");
  const DeskRuns& d = Desk();
  const double recon = MedianOf(d.eval_primary, &SegmentRecord::recon_db);
  const double recon_no_sq = MedianOf(d.eval_squaring_off, &SegmentRecord::recon_db);
  std::printf("  autoencoding median: %.2f dB (squaring on), %.2f dB (squaring off); "
              "training wall time %.0f s for 4 runs\n",
              recon, recon_no_sq, d.train_secs);
  c.Expect(recon >= 15.0, "median autoencoding SI-SDR >= 15 dB on held-out vocals");
  c.Expect(recon_no_sq < recon, "squaring-off ablation scores strictly lower");
}

TEST_CASE("criterion 8: desk-scale separation beats the mixture and TV regularizes") {
  Criterion c(8, "masked separation >= input + 5 dB; TV(A_m) lower than the lambda=0 run");
  const DeskRuns& d = Desk();
  const double masked = MedianOf(d.eval_primary, &SegmentRecord::masked_db);
  const double input = MedianOf(d.eval_primary, &SegmentRecord::input_db);
  const double tv_primary = MedianOf(d.eval_primary, &SegmentRecord::tv_mix);
  const double tv_lambda0 = MedianOf(d.eval_lambda_zero, &SegmentRecord::tv_mix);
  std::printf("  masked median %.2f dB vs input %.2f dB; TV(A_m) %.5f (lambda 0.5) vs %.5f "
              "(lambda 0)\n",
              masked, input, tv_primary, tv_lambda0);
  c.Expect(masked >= input + 5.0, "masked separation exceeds no-processing by >= 5 dB");
  c.Expect(tv_primary < tv_lambda0, "TV regularization lowers median TV(A_m)");
}

TEST_CASE("criterion 9: bit-exact reproducibility of training and reports") {
  Criterion c(9, "identical seed gives identical checkpoint hashes and CSVs");
  const DeskRuns& d = Desk();
  c.Expect(HashFile(d.primary.last_path) == HashFile(d.repeat.last_path),
           "checkpoint hashes identical across runs");

  const EvalOptions opts = DeskEvalOptions();
  const TrainConfig base = DeskConfig();
  WriteEvalReport((d.root / "report_primary").string(), {d.eval_primary},
                  ConfigHashHex(base), opts);
  WriteEvalReport((d.root / "report_repeat").string(), {d.eval_repeat},
                  ConfigHashHex(base), opts);
  for (const char* name : {"reconstruction.csv", "masked_separation.csv", "stft_baseline.csv",
                           "input_mixture.csv", "tv_mix.csv", "summary.json"}) {
    c.Expect(FileBytes(d.root / "report_primary" / name) ==
                 FileBytes(d.root / "report_repeat" / name),
             "report files byte-identical");
  }
}
