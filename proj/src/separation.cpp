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

#include "sinedae/separation.hpp"

#include "sinedae/kernels.hpp"

namespace sinedae {

Matrix BinaryMask(const Matrix& a_v, const Matrix& a_acc) {
  CheckSameShape(a_v, a_acc, "binary_mask");
  Matrix m(a_v.rows, a_v.cols);
  for (std::size_t i = 0; i < m.Size(); ++i) {
    m.data[i] = a_v.data[i] > a_acc.data[i] ? 1.0 : 0.0;
  }
  return m;
}

Matrix ApplyMask(const Matrix& mask, const Matrix& a) {
  return kern::Hadamard(mask, a);
}

Matrix Separate(const Model& model, const Matrix& mixture, const Matrix& a_v,
                const Matrix& a_acc, MaskApplication application) {
  const Matrix mask = BinaryMask(a_v, a_acc);
  const Matrix base =
      application == MaskApplication::kEncodedMixture ? Encode(model, mixture) : a_v;
  CheckSameShape(mask, base, "separate");
  return Decode(model, ApplyMask(mask, base), mixture.cols);
}

}  // namespace sinedae
