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

#ifndef SINEDAE_SEPARATION_HPP_
#define SINEDAE_SEPARATION_HPP_

#include "sinedae/matrix.hpp"
#include "sinedae/model.hpp"

namespace sinedae {

/// Where the oracle mask is applied.
enum class MaskApplication {
  kEncodedMixture,  // decode(mask * encode(mixture)) -- the default
  kMaskedStem,      // decode(mask * encode(vocals)); comparison path
};

/// Dominance mask: m[c,t] = 1 iff a_v[c,t] > a_acc[c,t]; ties go to the
/// accompaniment (0). Entries are exactly 0 or 1.
Matrix BinaryMask(const Matrix& a_v, const Matrix& a_acc);

/// Elementwise mask application.
Matrix ApplyMask(const Matrix& mask, const Matrix& a);

/// Informed separation of one segment: reconstructs the vocal estimate from
/// the binary-masked mixture representation (or the masked stem encoding,
/// per `application`). Stems and mixture must be aligned; the mixture is
/// the sample-wise stem sum.
Matrix Separate(const Model& model, const Matrix& mixture, const Matrix& a_v,
                const Matrix& a_acc,
                MaskApplication application = MaskApplication::kEncodedMixture);

}  // namespace sinedae

#endif  // SINEDAE_SEPARATION_HPP_
