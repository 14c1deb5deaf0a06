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

#include "sinedae/verification.hpp"

#include <cmath>

#include "sinedae/kernels.hpp"
#include "sinedae/losses.hpp"
#include "sinedae/rng.hpp"
#include "sinedae/tape.hpp"

namespace sinedae {
namespace {

struct Built {
  Tape tape;
  ModelVars vars;
  Tape::Var loss = -1;
};

void BuildLoss(Built& b, const ModelLossCase& c) {
  b.vars = RegisterParams(b.tape, c.model);
  const Tape::Var kernels = KernelsOnTape(b.tape, b.vars, c.model);
  const Tape::Var clean = b.tape.Constant(Matrix::RowVector(c.clean));
  const Tape::Var noisy = b.tape.Constant(Matrix::RowVector(c.noisy));
  const Tape::Var a_v = EncodeOnTape(b.tape, b.vars, c.model.hyper, noisy);
  const Tape::Var est = DecodeOnTape(b.tape, a_v, kernels, c.model.hyper.stride,
                                     static_cast<int>(c.clean.size()));
  Tape::Var loss = NegSnrOnTape(b.tape, clean, est);
  if (c.lambda > 0.0) {
    Tape::Var a_reg = a_v;
    if (c.reg_target == RegTarget::kMix) {
      const Tape::Var mixed = b.tape.Constant(Matrix::RowVector(c.mixed));
      a_reg = EncodeOnTape(b.tape, b.vars, c.model.hyper, mixed);
    }
    loss = b.tape.Add(loss, b.tape.Scale(TvLossOnTape(b.tape, a_reg), c.lambda));
  }
  b.loss = loss;
}

std::vector<double> RandomToneMix(Rng& rng, int n, int tones, double amp) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < tones; ++k) {
    const double f = rng.Uniform(0.01, 0.35);
    const double phase = rng.Uniform(0.0, 2.0 * M_PI);
    const double a = amp * rng.Uniform(0.4, 1.0);
    for (int i = 0; i < n; ++i) out[i] += a * std::sin(2.0 * M_PI * f * i + phase);
  }
  return out;
}

// Kink-distance guards; see MakeTinyModelCase.
bool SafeForFiniteDifferences(const ModelLossCase& c) {
  const ModelHyper& h = c.model.hyper;
  for (const std::vector<double>* sig : {&c.noisy, &c.mixed}) {
    if (sig == &c.mixed && !(c.lambda > 0.0 && c.reg_target == RegTarget::kMix)) continue;
    const Matrix x = Matrix::RowVector(*sig);
    const Matrix front = kern::Conv1dStrided(x, c.model.conv1, h.stride, 0);
    const Matrix mid = kern::Conv1dDilated(front, c.model.conv2, h.dilation);
    const Matrix pre = kern::Add(mid, front);
    for (double v : pre.data) {
      if (std::fabs(v) < 1e-3) return false;
    }
    if (c.lambda > 0.0) {
      const Matrix a = kern::Relu(pre);
      const bool is_reg = (c.reg_target == RegTarget::kMix) == (sig == &c.mixed);
      if (is_reg) {
        for (int r = 1; r < a.rows; ++r) {
          for (int t = 0; t < a.cols; ++t) {
            const double d = a.At(r, t) - a.At(r - 1, t);
            if (d != 0.0 && std::fabs(d) < 1e-4) return false;
          }
        }
        for (int r = 0; r < a.rows; ++r) {
          for (int t = 1; t < a.cols; ++t) {
            const double d = a.At(r, t) - a.At(r, t - 1);
            if (d != 0.0 && std::fabs(d) < 1e-4) return false;
          }
        }
      }
    }
  }
  return true;
}

}  // namespace

double ModelLossCase::LossValue() const {
  Built b;
  BuildLoss(b, *this);
  return b.tape.Value(b.loss).At(0, 0);
}

std::vector<Matrix> ModelLossCase::Grads() const {
  Built b;
  BuildLoss(b, *this);
  b.tape.Backward(b.loss);
  std::vector<Matrix> grads;
  grads.push_back(b.tape.GradOf(b.vars.conv1));
  grads.push_back(b.tape.GradOf(b.vars.conv2));
  switch (model.decoder) {
    case DecoderKind::kModCos:
      grads.push_back(b.tape.GradOf(b.vars.freq));
      grads.push_back(b.tape.GradOf(b.vars.phase));
      grads.push_back(b.tape.GradOf(b.vars.env));
      break;
    case DecoderKind::kCos:
      grads.push_back(b.tape.GradOf(b.vars.freq));
      grads.push_back(b.tape.GradOf(b.vars.phase));
      break;
    case DecoderKind::kConv:
      grads.push_back(b.tape.GradOf(b.vars.env));
      break;
  }
  return grads;
}

GradCheckProblem ModelLossCase::Problem() {
  GradCheckProblem p;
  for (const ParamRef& ref : TrainableParams(model)) p.params.push_back({ref.name, ref.value});
  p.loss = [this]() { return LossValue(); };
  p.grads = [this]() { return Grads(); };
  return p;
}

ModelLossCase MakeTinyModelCase(const ModelHyper& hyper, int n, DecoderKind decoder,
                                bool squared_freq, double lambda, RegTarget reg_target,
                                std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    const std::uint64_t s = seed + attempt;
    ModelLossCase c;
    c.model = InitModel(hyper, decoder, squared_freq, s);
    c.lambda = lambda;
    c.reg_target = reg_target;

    Rng rng(MixSeed(s, 0x7e57ULL));
    c.clean = RandomToneMix(rng, n, 4, 0.4);
    c.noisy = c.clean;
    for (double& v : c.noisy) v += 0.01 * rng.Normal();
    const std::vector<double> other = RandomToneMix(rng, n, 3, 0.4);
    c.mixed = c.clean;
    for (std::size_t i = 0; i < c.mixed.size(); ++i) c.mixed[i] += other[i];

    if (SafeForFiniteDifferences(c)) return c;
  }
  throw NumericError("could not build a finite-difference-safe model case");
}

std::vector<GradCheckReport> FullModelGradCheck(const ModelHyper& hyper, int n,
                                                std::uint64_t seed, double h, double tol) {
  struct Variant {
    DecoderKind kind;
    bool squared;
  };
  const Variant variants[] = {{DecoderKind::kModCos, true},
                              {DecoderKind::kModCos, false},
                              {DecoderKind::kCos, true},
                              {DecoderKind::kCos, false},
                              {DecoderKind::kConv, true}};
  std::vector<GradCheckReport> reports;
  for (const Variant& v : variants) {
    ModelLossCase c =
        MakeTinyModelCase(hyper, n, v.kind, v.squared, 0.5, RegTarget::kMix, seed);
    GradCheckProblem p = c.Problem();
    reports.push_back(GradCheck(p, h, tol));
  }
  return reports;
}

}  // namespace sinedae
