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

#ifndef SINEDAE_REFERENCE_HPP_
#define SINEDAE_REFERENCE_HPP_

#include "sinedae/matrix.hpp"

// Serial brute-force implementations of every convolution kernel: direct
// sums for the forward passes, scatter-style accumulation for the backward
// passes. They share no code with the OpenMP kernels in kernels.hpp and are
// kept as the test oracle and the baseline for the kernel benchmark.
namespace sinedae::ref {

/// Output frame count T = ceil(N / S).
int OutputFrames(int n, int stride);

/// Left padding for the symmetric "same" policy: total padding is sized so
/// that T = ceil(N/S) output frames fit exactly; the extra zero goes on the
/// right when the total is odd.
int SamePadLeft(int n, int kernel_len, int stride);

/// Total tap span of "same" dilated padding: (L'-1)*D zeros, split with the
/// extra zero on the right.
int DilatedPadLeft(int kernel_len, int dilation);

// Cross-correlation semantics throughout: out[co,t] sums
// k[co, ci*L + j] * x[ci, t*stride + j - pad_left] over ci and j, reading
// zeros outside the input.
Matrix Conv1dStrided(const Matrix& input, const Matrix& kernels, int stride,
                     int pad_left);

/// Stride-1 convolution with taps spaced `dilation` frames apart and "same"
/// padding, so the output length equals the input length.
Matrix Conv1dDilated(const Matrix& input, const Matrix& kernels, int dilation);

/// Overlap-add synthesis: out[n] = sum_c sum_t A[c,t] * W[c, n - t*stride],
/// cropped to out_len samples.
Matrix TransposedConv1d(const Matrix& activations, const Matrix& kernels,
                        int stride, int out_len);

// Scatter-style backward passes (loop over output positions, accumulate
// into the operand gradients).
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

}  // namespace sinedae::ref

#endif  // SINEDAE_REFERENCE_HPP_
