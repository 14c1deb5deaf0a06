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

#ifndef SINEDAE_KERNELS_HPP_
#define SINEDAE_KERNELS_HPP_

#include "sinedae/matrix.hpp"

// OpenMP-parallel kernels. Every loop is gather-style: each output element
// is owned by exactly one iteration and its reduction order is fixed, so
// results are bitwise identical for any thread count or schedule. Semantics
// match sinedae::ref exactly (cross-correlation, same index conventions).
namespace sinedae::kern {

int OutputFrames(int n, int stride);
int SamePadLeft(int n, int kernel_len, int stride);
int DilatedPadLeft(int kernel_len, int dilation);

Matrix Conv1dStrided(const Matrix& input, const Matrix& kernels, int stride,
                     int pad_left);
Matrix Conv1dDilated(const Matrix& input, const Matrix& kernels, int dilation);
Matrix TransposedConv1d(const Matrix& activations, const Matrix& kernels,
                        int stride, int out_len);

Matrix Conv1dStridedGradInput(const Matrix& grad_out, const Matrix& kernels,
                              int stride, int pad_left, int in_rows, int in_cols);
Matrix Conv1dStridedGradKernels(const Matrix& grad_out, const Matrix& input,
                                int stride, int pad_left, int kernel_cols);
Matrix Conv1dDilatedGradInput(const Matrix& grad_out, const Matrix& kernels,
                              int dilation, int in_rows, int in_cols);
Matrix Conv1dDilatedGradKernels(const Matrix& grad_out, const Matrix& input,
                                int dilation, int kernel_cols);
Matrix TransposedConv1dGradActivations(const Matrix& grad_out, const Matrix& kernels,
                                       int stride, int act_rows, int act_cols);
Matrix TransposedConv1dGradKernels(const Matrix& grad_out, const Matrix& activations,
                                   int stride, int kernel_len);

Matrix Relu(const Matrix& x);
/// Passes grad where x > 0; the subgradient at x == 0 is fixed to 0.
Matrix ReluGrad(const Matrix& grad_out, const Matrix& x);

Matrix Add(const Matrix& a, const Matrix& b);
Matrix Hadamard(const Matrix& a, const Matrix& b);
Matrix Scale(const Matrix& a, double s);

}  // namespace sinedae::kern

#endif  // SINEDAE_KERNELS_HPP_
