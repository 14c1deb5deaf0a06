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

#ifndef SINEDAE_GRADCHECK_HPP_
#define SINEDAE_GRADCHECK_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sinedae/matrix.hpp"

namespace sinedae {

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;
  bool pass = false;
};

struct GradCheckReport {
  double h = 0.0;
  double tol = 0.0;
  std::vector<GradCheckEntry> entries;
  bool all_pass = false;
};

/// A differentiable scalar function under test. `loss` runs a fresh forward
/// pass at the current parameter values; `grads` runs forward+backward once
/// and returns analytic gradients in the same order as `params`. The
/// parameter matrices are perturbed in place and restored.
struct GradCheckProblem {
  std::vector<std::pair<std::string, Matrix*>> params;
  std::function<double()> loss;
  std::function<std::vector<Matrix>()> grads;
};

/// Central-difference verification of analytic gradients. Per parameter
/// tensor, reports max over elements of |a - n| / max(|a|, |n|, 1e-4); the
/// absolute floor keeps noise-dominated near-zero pairs from spuriously
/// failing. Reports failures, never throws on them.
GradCheckReport GradCheck(const GradCheckProblem& problem, double h, double tol);

}  // namespace sinedae

#endif  // SINEDAE_GRADCHECK_HPP_
