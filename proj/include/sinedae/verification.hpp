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

#ifndef SINEDAE_VERIFICATION_HPP_
#define SINEDAE_VERIFICATION_HPP_

#include <cstdint>
#include <vector>

#include "sinedae/config.hpp"
#include "sinedae/gradcheck.hpp"
#include "sinedae/model.hpp"

namespace sinedae {

/// A frozen full-objective evaluation point: model parameters plus one
/// (clean, noisy, mixed) signal triple. The loss is the training objective
/// (reconstruction dB term + lambda * TV of the configured representation).
struct ModelLossCase {
  Model model;
  std::vector<double> clean;
  std::vector<double> noisy;
  std::vector<double> mixed;
  double lambda = 0.5;
  RegTarget reg_target = RegTarget::kMix;

  double LossValue() const;
  std::vector<Matrix> Grads() const;  // in TrainableParams order
  GradCheckProblem Problem();         // borrows this; keep the case alive
};

/// Builds a finite-difference-safe evaluation point on a tiny model: the
/// case is regenerated with successive seeds until every ReLU
/// pre-activation is at least 1e-3 in magnitude and every nonzero TV first
/// difference is at least 1e-4, so central differences at h = 1e-5 never
/// straddle a kink.
ModelLossCase MakeTinyModelCase(const ModelHyper& hyper, int n, DecoderKind decoder,
                                bool squared_freq, double lambda, RegTarget reg_target,
                                std::uint64_t seed);

/// Gradcheck of the full objective across every decoder variant and both
/// squaring settings on the given tiny configuration.
std::vector<GradCheckReport> FullModelGradCheck(const ModelHyper& hyper, int n,
                                                std::uint64_t seed, double h, double tol);

}  // namespace sinedae

#endif  // SINEDAE_VERIFICATION_HPP_
