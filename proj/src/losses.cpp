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

#include "sinedae/losses.hpp"

#include <cmath>

namespace sinedae {
namespace {

double Sign(double v) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return 0.0;  // fixed subgradient at ties
}

}  // namespace

double TvLoss(const Matrix& a) {
  if (a.rows < 1 || a.cols < 1) throw DimensionError("tv_loss: empty matrix");
  double acc = 0.0;
  for (int c = 1; c < a.rows; ++c) {
    const double* cur = a.Row(c);
    const double* prev = a.Row(c - 1);
    for (int t = 0; t < a.cols; ++t) acc += std::fabs(cur[t] - prev[t]);
  }
  for (int c = 0; c < a.rows; ++c) {
    const double* row = a.Row(c);
    for (int t = 1; t < a.cols; ++t) acc += std::fabs(row[t] - row[t - 1]);
  }
  return acc / (static_cast<double>(a.rows) * a.cols);
}

double NegSnr(const Matrix& ref, const Matrix& est) {
  CheckSameShape(ref, est, "neg_snr");
  double ref_energy = 0.0;
  double err_energy = 0.0;
  for (std::size_t i = 0; i < ref.Size(); ++i) {
    ref_energy += ref.data[i] * ref.data[i];
    const double d = ref.data[i] - est.data[i];
    err_energy += d * d;
  }
  if (ref_energy <= 0.0) throw DataError("neg_snr: zero-energy reference");
  return -10.0 * std::log10(ref_energy / (err_energy + kNegSnrEpsilon));
}

LossBreakdown TotalLoss(const Matrix& ref, const Matrix& est, const Matrix& a_reg,
                        double lambda) {
  LossBreakdown b;
  b.neg_snr = NegSnr(ref, est);
  b.tv = TvLoss(a_reg);
  b.lambda = lambda;
  b.total = b.neg_snr + lambda * b.tv;
  return b;
}

Tape::Var TvLossOnTape(Tape& tape, Tape::Var a) {
  const Matrix& av = tape.Value(a);
  Matrix value(1, 1);
  value.At(0, 0) = TvLoss(av);
  return tape.Custom({a}, std::move(value),
                     [](Tape& t, const std::vector<Tape::Var>& in, Tape::Var out) {
                       const double g = t.GradOf(out).At(0, 0);
                       const Matrix& m = t.Value(in[0]);
                       const double scale = g / (static_cast<double>(m.rows) * m.cols);
                       Matrix grad(m.rows, m.cols);
                       for (int c = 1; c < m.rows; ++c) {
                         const double* cur = m.Row(c);
                         const double* prev = m.Row(c - 1);
                         double* gc = grad.Row(c);
                         double* gp = grad.Row(c - 1);
                         for (int tt = 0; tt < m.cols; ++tt) {
                           const double s = Sign(cur[tt] - prev[tt]) * scale;
                           gc[tt] += s;
                           gp[tt] -= s;
                         }
                       }
                       for (int c = 0; c < m.rows; ++c) {
                         const double* row = m.Row(c);
                         double* gc = grad.Row(c);
                         for (int tt = 1; tt < m.cols; ++tt) {
                           const double s = Sign(row[tt] - row[tt - 1]) * scale;
                           gc[tt] += s;
                           gc[tt - 1] -= s;
                         }
                       }
                       t.AccumulateGrad(in[0], grad);
                     });
}

Tape::Var NegSnrOnTape(Tape& tape, Tape::Var ref, Tape::Var est) {
  const Matrix& rv = tape.Value(ref);
  const Matrix& ev = tape.Value(est);
  Matrix value(1, 1);
  value.At(0, 0) = NegSnr(rv, ev);
  return tape.Custom(
      {ref, est}, std::move(value),
      [](Tape& t, const std::vector<Tape::Var>& in, Tape::Var out) {
        const double g = t.GradOf(out).At(0, 0);
        const Matrix& r = t.Value(in[0]);
        const Matrix& e = t.Value(in[1]);
        double err_energy = 0.0;
        for (std::size_t i = 0; i < r.Size(); ++i) {
          const double d = r.data[i] - e.data[i];
          err_energy += d * d;
        }
        // d/de of -10/ln10 * (ln|r|^2 - ln(|r-e|^2 + eps))
        const double k = g * (10.0 / std::log(10.0)) * 2.0 / (err_energy + kNegSnrEpsilon);
        Matrix grad(e.rows, e.cols);
        for (std::size_t i = 0; i < e.Size(); ++i) {
          grad.data[i] = k * (e.data[i] - r.data[i]);
        }
        t.AccumulateGrad(in[1], grad);
        // the reference is data, not a parameter; no gradient path needed
      });
}

}  // namespace sinedae
