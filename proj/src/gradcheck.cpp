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

#include "sinedae/gradcheck.hpp"

#include <cmath>

namespace sinedae {

GradCheckReport GradCheck(const GradCheckProblem& problem, double h, double tol) {
  GradCheckReport report;
  report.h = h;
  report.tol = tol;

  const std::vector<Matrix> analytic = problem.grads();
  if (analytic.size() != problem.params.size()) {
    throw DimensionError("gradcheck: analytic gradient count mismatch");
  }

  report.all_pass = true;
  for (std::size_t p = 0; p < problem.params.size(); ++p) {
    Matrix* m = problem.params[p].second;
    const Matrix& a = analytic[p];
    if (!a.SameShape(*m)) throw DimensionError("gradcheck: gradient shape mismatch");

    double max_rel = 0.0;
    for (std::size_t i = 0; i < m->Size(); ++i) {
      const double saved = m->data[i];
      m->data[i] = saved + h;
      const double f_plus = problem.loss();
      m->data[i] = saved - h;
      const double f_minus = problem.loss();
      m->data[i] = saved;

      const double numeric = (f_plus - f_minus) / (2.0 * h);
      const double denom = std::max({std::fabs(a.data[i]), std::fabs(numeric), 1e-4});
      const double rel = std::fabs(a.data[i] - numeric) / denom;
      if (rel > max_rel) max_rel = rel;
    }

    GradCheckEntry entry{problem.params[p].first, max_rel, max_rel <= tol};
    if (!entry.pass) report.all_pass = false;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace sinedae
