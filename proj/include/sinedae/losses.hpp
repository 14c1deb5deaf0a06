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

#ifndef SINEDAE_LOSSES_HPP_
#define SINEDAE_LOSSES_HPP_

#include "sinedae/matrix.hpp"
#include "sinedae/tape.hpp"

namespace sinedae {

/// Epsilon inside the neg-SNR denominator; keeps the perfect-reconstruction
/// limit finite without measurable bias at realistic SNRs.
constexpr double kNegSnrEpsilon = 1e-12;

struct LossBreakdown {
  double neg_snr = 0.0;  // dB-valued reconstruction term
  double tv = 0.0;       // non-negative smoothness term
  double lambda = 0.0;
  double total = 0.0;    // neg_snr + lambda * tv
};

/// Mean l1 norm of first differences across rows (templates) and columns
/// (time-frames): (1/(C*T)) * (sum_c |row_c - row_{c-1}|_1 +
/// sum_t |col_t - col_{t-1}|_1). Zero for constant input.
double TvLoss(const Matrix& a);

/// -10*log10(|ref|^2 / (|ref - est|^2 + eps)); lower is better. Throws
/// DataError for a zero-energy reference (such segments are filtered as
/// silent upstream).
double NegSnr(const Matrix& ref, const Matrix& est);

LossBreakdown TotalLoss(const Matrix& ref, const Matrix& est, const Matrix& a_reg,
                        double lambda);

// Tape nodes with analytic backward passes. The l1 subgradient at exact
// ties in TV is fixed to 0.
Tape::Var TvLossOnTape(Tape& tape, Tape::Var a);
Tape::Var NegSnrOnTape(Tape& tape, Tape::Var ref, Tape::Var est);

}  // namespace sinedae

#endif  // SINEDAE_LOSSES_HPP_
