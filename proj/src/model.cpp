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

#include "sinedae/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sinedae/kernels.hpp"
#include "sinedae/rng.hpp"

namespace sinedae {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void FillUniform(Matrix& m, Rng& rng, double bound) {
  for (double& v : m.data) v = rng.Uniform(-bound, bound);
}

double FreqGain(const Model& model, int c) {
  const double f = model.freq.At(c, 0);
  return model.squared_freq ? f * f : f;
}

Matrix PermuteRows(const Matrix& m, const std::vector<int>& perm) {
  Matrix out(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    const double* src = m.Row(perm[r]);
    std::copy(src, src + m.cols, out.Row(r));
  }
  return out;
}

// Permutes both the output channels (rows) and the input-channel blocks
// within each row of a C x (C*taps) kernel matrix.
Matrix PermuteConv2(const Matrix& m, const std::vector<int>& perm, int taps) {
  const int channels = m.rows;
  Matrix out(m.rows, m.cols);
  for (int co = 0; co < channels; ++co) {
    const double* src = m.Row(perm[co]);
    double* dst = out.Row(co);
    for (int ci = 0; ci < channels; ++ci) {
      const double* block = src + perm[ci] * taps;
      std::copy(block, block + taps, dst + ci * taps);
    }
  }
  return out;
}

}  // namespace

std::string DecoderKindName(DecoderKind k) {
  switch (k) {
    case DecoderKind::kModCos: return "mod-cos";
    case DecoderKind::kCos: return "cos";
    case DecoderKind::kConv: return "conv";
  }
  return "mod-cos";
}

DecoderKind ParseDecoderKind(const std::string& name) {
  if (name == "mod-cos") return DecoderKind::kModCos;
  if (name == "cos") return DecoderKind::kCos;
  if (name == "conv") return DecoderKind::kConv;
  throw ConfigError("unknown decoder kind: " + name);
}

Model InitModel(const ModelHyper& hyper, DecoderKind decoder, bool squared_freq,
                std::uint64_t seed) {
  if (hyper.channels < 1 || hyper.kernel_len < 1 || hyper.dilated_len < 1 ||
      hyper.stride < 1 || hyper.dilation < 1) {
    throw ConfigError("model hyperparameters must be positive");
  }
  Model m;
  m.hyper = hyper;
  m.decoder = decoder;
  m.squared_freq = squared_freq;

  const int c = hyper.channels;
  const int l = hyper.kernel_len;
  const int lp = hyper.dilated_len;

  Rng rng(MixSeed(seed, 0x6d6f64656cULL));
  m.conv1 = Matrix(c, l);
  FillUniform(m.conv1, rng, 1.0 / std::sqrt(static_cast<double>(l)));
  m.conv2 = Matrix(c, c * lp);
  FillUniform(m.conv2, rng, 1.0 / std::sqrt(static_cast<double>(c) * lp));

  m.freq = Matrix(c, 1);
  for (int i = 0; i < c; ++i) m.freq.At(i, 0) = std::sqrt(i / (2.0 * c));
  m.phase = Matrix(c, 1);

  m.env = Matrix(c, l);
  if (decoder == DecoderKind::kCos) {
    for (double& v : m.env.data) v = 1.0;
  } else {
    // per-sample synthesis fan-in: C kernels overlapping ceil(L/S) deep
    const double fan = static_cast<double>(c) * ((l + hyper.stride - 1) / hyper.stride);
    FillUniform(m.env, rng, 1.0 / std::sqrt(fan));
  }
  return m;
}

std::vector<ParamRef> TrainableParams(Model& model) {
  std::vector<ParamRef> out;
  out.push_back({"conv1", &model.conv1});
  out.push_back({"conv2", &model.conv2});
  switch (model.decoder) {
    case DecoderKind::kModCos:
      out.push_back({"freq", &model.freq});
      out.push_back({"phase", &model.phase});
      out.push_back({"env", &model.env});
      break;
    case DecoderKind::kCos:
      out.push_back({"freq", &model.freq});
      out.push_back({"phase", &model.phase});
      break;
    case DecoderKind::kConv:
      out.push_back({"kernels", &model.env});
      break;
  }
  return out;
}

std::size_t ParameterCount(const Model& model) {
  std::size_t total = 0;
  Model& m = const_cast<Model&>(model);
  for (const ParamRef& p : TrainableParams(m)) total += p.value->Size();
  return total;
}

Matrix BuildKernels(const Model& model) {
  if (model.decoder == DecoderKind::kConv) return model.env;
  const int c = model.hyper.channels;
  const int l = model.hyper.kernel_len;
  Matrix w(c, l);
  for (int ch = 0; ch < c; ++ch) {
    const double g = FreqGain(model, ch);
    const double phi = model.phase.At(ch, 0);
    const double* b = model.env.Row(ch);
    double* row = w.Row(ch);
    for (int n = 0; n < l; ++n) row[n] = std::cos(kTwoPi * g * n + phi) * b[n];
  }
  return w;
}

Matrix Encode(const Model& model, const Matrix& signal) {
  if (signal.rows != 1) throw DimensionError("encode: signal must be 1 x N");
  const ModelHyper& h = model.hyper;
  // Analysis frame t reads [t*S, t*S + L), zero-extended on the right; a
  // length-dependent symmetric split would shift the analysis grid against
  // the synthesis grid whenever N changes.
  Matrix front = kern::Conv1dStrided(signal, model.conv1, h.stride, 0);
  Matrix mid = kern::Conv1dDilated(front, model.conv2, h.dilation);
  return kern::Relu(kern::Add(mid, front));
}

Matrix Decode(const Model& model, const Matrix& activations, int out_len) {
  if (activations.rows != model.hyper.channels) {
    throw DimensionError("decode: activation channel count mismatch");
  }
  if (kern::OutputFrames(out_len, model.hyper.stride) != activations.cols) {
    throw DimensionError("decode: frame count inconsistent with out_len");
  }
  return kern::TransposedConv1d(activations, BuildKernels(model), model.hyper.stride, out_len);
}

std::vector<int> SortKernels(Model& model, bool co_permute) {
  const int c = model.hyper.channels;
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  if (model.decoder == DecoderKind::kConv) return perm;  // no frequencies to sort

  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    const double fa = model.freq.At(a, 0);
    const double fb = model.freq.At(b, 0);
    return fa * fa < fb * fb;
  });

  model.freq = PermuteRows(model.freq, perm);
  model.phase = PermuteRows(model.phase, perm);
  model.env = PermuteRows(model.env, perm);
  if (co_permute) {
    model.conv1 = PermuteRows(model.conv1, perm);
    model.conv2 = PermuteConv2(model.conv2, perm, model.hyper.dilated_len);
  }
  return perm;
}

void PermuteAligned(const Model& model, const std::vector<int>& perm,
                    const std::vector<Matrix*>& mats, bool co_permute) {
  Model& m = const_cast<Model&>(model);
  const std::vector<ParamRef> params = TrainableParams(m);
  if (params.size() != mats.size()) {
    throw DimensionError("permute_aligned: matrix count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix* target = mats[i];
    const bool encoder_slot = params[i].name == "conv1" || params[i].name == "conv2";
    if (encoder_slot && !co_permute) continue;
    if (params[i].name == "conv2") {
      *target = PermuteConv2(*target, perm, model.hyper.dilated_len);
    } else {
      *target = PermuteRows(*target, perm);
    }
  }
}

ModelVars RegisterParams(Tape& tape, const Model& model) {
  ModelVars v;
  v.conv1 = tape.Param(model.conv1);
  v.conv2 = tape.Param(model.conv2);
  switch (model.decoder) {
    case DecoderKind::kModCos:
      v.freq = tape.Param(model.freq);
      v.phase = tape.Param(model.phase);
      v.env = tape.Param(model.env);
      break;
    case DecoderKind::kCos:
      v.freq = tape.Param(model.freq);
      v.phase = tape.Param(model.phase);
      v.env = tape.Constant(model.env);  // frozen unit envelope
      break;
    case DecoderKind::kConv:
      v.env = tape.Param(model.env);
      break;
  }
  return v;
}

Tape::Var KernelsOnTape(Tape& tape, const ModelVars& vars, const Model& model) {
  if (model.decoder == DecoderKind::kConv) return vars.env;

  const bool squared = model.squared_freq;
  const Matrix& freq = tape.Value(vars.freq);
  const Matrix& phase = tape.Value(vars.phase);
  const Matrix& env = tape.Value(vars.env);
  const int c = freq.rows;
  const int l = env.cols;

  Matrix w(c, l);
  for (int ch = 0; ch < c; ++ch) {
    const double f = freq.At(ch, 0);
    const double g = squared ? f * f : f;
    const double phi = phase.At(ch, 0);
    const double* b = env.Row(ch);
    double* row = w.Row(ch);
    for (int n = 0; n < l; ++n) row[n] = std::cos(kTwoPi * g * n + phi) * b[n];
  }

  return tape.Custom(
      {vars.freq, vars.phase, vars.env}, std::move(w),
      [squared](Tape& t, const std::vector<Tape::Var>& in, Tape::Var out) {
        const Matrix& g_out = t.GradOf(out);
        const Matrix& freq_v = t.Value(in[0]);
        const Matrix& phase_v = t.Value(in[1]);
        const Matrix& env_v = t.Value(in[2]);
        const int c = freq_v.rows;
        const int l = env_v.cols;

        Matrix g_f(c, 1);
        Matrix g_phi(c, 1);
        Matrix g_b(c, l);
        for (int ch = 0; ch < c; ++ch) {
          const double f = freq_v.At(ch, 0);
          const double g = squared ? f * f : f;
          const double dg_df = squared ? 2.0 * f : 1.0;
          const double phi = phase_v.At(ch, 0);
          const double* b = env_v.Row(ch);
          const double* go = g_out.Row(ch);
          double acc_f = 0.0;
          double acc_phi = 0.0;
          double* gb = g_b.Row(ch);
          for (int n = 0; n < l; ++n) {
            const double theta = kTwoPi * g * n + phi;
            const double s = std::sin(theta);
            const double common = -go[n] * s * b[n];
            acc_phi += common;
            acc_f += common * kTwoPi * n * dg_df;
            gb[n] = go[n] * std::cos(theta);
          }
          g_f.At(ch, 0) = acc_f;
          g_phi.At(ch, 0) = acc_phi;
        }
        t.AccumulateGrad(in[0], g_f);
        t.AccumulateGrad(in[1], g_phi);
        t.AccumulateGrad(in[2], g_b);
      });
}

Tape::Var EncodeOnTape(Tape& tape, const ModelVars& vars, const ModelHyper& hyper,
                       Tape::Var signal) {
  const Matrix& x = tape.Value(signal);
  if (x.rows != 1) throw DimensionError("encode: signal must be 1 x N");
  const Tape::Var front = tape.Conv1dStrided(signal, vars.conv1, hyper.stride, 0);
  const Tape::Var mid = tape.Conv1dDilated(front, vars.conv2, hyper.dilation);
  return tape.Relu(tape.Add(mid, front));
}

Tape::Var DecodeOnTape(Tape& tape, Tape::Var activations, Tape::Var kernels, int stride,
                       int out_len) {
  if (kern::OutputFrames(out_len, stride) != tape.Value(activations).cols) {
    throw DimensionError("decode: frame count inconsistent with out_len");
  }
  return tape.TransposedConv1d(activations, kernels, stride, out_len);
}

}  // namespace sinedae
