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

#ifndef SINEDAE_MODEL_HPP_
#define SINEDAE_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sinedae/matrix.hpp"
#include "sinedae/tape.hpp"

namespace sinedae {

// Decoder families: amplitude-modulated cosines (the default), plain
// cosines with a fixed unit envelope, and directly learned kernels.
enum class DecoderKind { kModCos, kCos, kConv };

std::string DecoderKindName(DecoderKind k);
DecoderKind ParseDecoderKind(const std::string& name);  // throws ConfigError

struct ModelHyper {
  int channels = 800;     // C: templates / kernel count
  int kernel_len = 2048;  // L: front-end and decoder kernel length
  int dilated_len = 5;    // L': second-stage kernel length
  int stride = 256;       // S: front-end stride; T = ceil(N/S)
  int dilation = 10;      // D: tap spacing of the second stage
};

// Full trainable state. The encoder is two bias-free convolutions with a
// residual sum and ReLU; the decoder synthesizes from C kernels of length
// L at stride S. For kModCos and kCos the kernels are re-parameterized as
// cos(2*pi*g(f_c)*n + phi_c) * b_c[n] with g(f) = f^2 when squared_freq is
// set (f otherwise); kConv learns the kernel matrix directly in `env`.
struct Model {
  ModelHyper hyper;
  DecoderKind decoder = DecoderKind::kModCos;
  bool squared_freq = true;

  Matrix conv1;  // C x L
  Matrix conv2;  // C x (C * L')
  Matrix freq;   // C x 1, normalized carrier frequencies (cycles/sample)
  Matrix phase;  // C x 1, radians
  Matrix env;    // C x L: envelopes b (kModCos), kernels W (kConv), unused (kCos)

  int Channels() const { return hyper.channels; }
};

struct ParamRef {
  std::string name;
  Matrix* value;
};

/// Fresh model with deterministic initialization: f_c = sqrt(c/(2C)) so the
/// squared frequencies tile [0, 0.5); phases zero; conv banks and envelopes
/// uniform in +-1/sqrt(fan-in).
Model InitModel(const ModelHyper& hyper, DecoderKind decoder, bool squared_freq,
                std::uint64_t seed);

/// Trainable parameters in checkpoint order: conv1, conv2, then freq, phase,
/// env for kModCos; freq, phase for kCos; env (the kernels) for kConv.
std::vector<ParamRef> TrainableParams(Model& model);

/// Decoder kernel matrix W (C x L).
Matrix BuildKernels(const Model& model);

/// Non-negative representation A = relu(dilated(h) + h), h = strided(x).
/// `signal` is 1 x N; the result is C x ceil(N/S).
Matrix Encode(const Model& model, const Matrix& signal);

/// Synthesis x_hat = transposed_conv(A, W, S) cropped to out_len (1 x N).
Matrix Decode(const Model& model, const Matrix& activations, int out_len);

/// Sorts kernels by ascending squared carrier frequency (stable). The
/// permutation is co-applied to the encoder channel axes when co_permute
/// is set, leaving decode(encode(x)) unchanged up to rounding. kConv has
/// no frequencies; the call is the identity there. Returns the permutation
/// (new index -> old index).
std::vector<int> SortKernels(Model& model, bool co_permute = true);

/// Applies a channel permutation to matrices aligned with
/// TrainableParams(model) order (optimizer moments, typically). Encoder
/// slots (conv1/conv2) are left untouched when co_permute is false,
/// mirroring SortKernels.
void PermuteAligned(const Model& model, const std::vector<int>& perm,
                    const std::vector<Matrix*>& mats, bool co_permute = true);

// Tape-graph counterparts used in training.
struct ModelVars {
  Tape::Var conv1 = -1;
  Tape::Var conv2 = -1;
  Tape::Var freq = -1;
  Tape::Var phase = -1;
  Tape::Var env = -1;
};

/// Registers parameters on the tape (frozen pieces become constants) in the
/// same order as TrainableParams.
ModelVars RegisterParams(Tape& tape, const Model& model);

/// W as a tape node; differentiable w.r.t. freq, phase and env.
Tape::Var KernelsOnTape(Tape& tape, const ModelVars& vars, const Model& model);

Tape::Var EncodeOnTape(Tape& tape, const ModelVars& vars, const ModelHyper& hyper,
                       Tape::Var signal);

Tape::Var DecodeOnTape(Tape& tape, Tape::Var activations, Tape::Var kernels, int stride,
                       int out_len);

/// Total trainable scalar count; cross-check against published sizes.
std::size_t ParameterCount(const Model& model);

}  // namespace sinedae

#endif  // SINEDAE_MODEL_HPP_
