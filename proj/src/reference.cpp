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

#include "sinedae/reference.hpp"

namespace sinedae::ref {
namespace {

int CheckKernelShape(const Matrix& input, const Matrix& kernels, const char* what) {
  if (input.rows <= 0 || kernels.rows <= 0) throw DimensionError(std::string(what) + ": empty operand");
  if (kernels.cols % input.rows != 0) {
    throw DimensionError(std::string(what) + ": kernel columns not divisible by input channels");
  }
  return kernels.cols / input.rows;  // per-channel tap count
}

}  // namespace

int OutputFrames(int n, int stride) { return (n + stride - 1) / stride; }

int SamePadLeft(int n, int kernel_len, int stride) {
  const int t = OutputFrames(n, stride);
  const int total = (t - 1) * stride + kernel_len - n;
  return total > 0 ? total / 2 : 0;
}

int DilatedPadLeft(int kernel_len, int dilation) {
  return (kernel_len - 1) * dilation / 2;
}

Matrix Conv1dStrided(const Matrix& input, const Matrix& kernels, int stride, int pad_left) {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  const int taps = CheckKernelShape(input, kernels, "conv1d_strided");
  const int cin = input.rows;
  const int n = input.cols;
  const int cout = kernels.rows;
  const int t_out = OutputFrames(n, stride);

  Matrix out(cout, t_out);
  for (int co = 0; co < cout; ++co) {
    for (int t = 0; t < t_out; ++t) {
      double acc = 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        for (int j = 0; j < taps; ++j) {
          const int idx = t * stride + j - pad_left;
          if (idx < 0 || idx >= n) continue;
          acc += kernels.At(co, ci * taps + j) * input.At(ci, idx);
        }
      }
      out.At(co, t) = acc;
    }
  }
  return out;
}

Matrix Conv1dDilated(const Matrix& input, const Matrix& kernels, int dilation) {
  if (dilation < 1) throw ConfigError("dilation must be >= 1");
  const int taps = CheckKernelShape(input, kernels, "conv1d_dilated");
  const int cin = input.rows;
  const int n = input.cols;
  const int cout = kernels.rows;
  const int pad = DilatedPadLeft(taps, dilation);

  Matrix out(cout, n);
  for (int co = 0; co < cout; ++co) {
    for (int t = 0; t < n; ++t) {
      double acc = 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        for (int j = 0; j < taps; ++j) {
          const int idx = t + j * dilation - pad;
          if (idx < 0 || idx >= n) continue;
          acc += kernels.At(co, ci * taps + j) * input.At(ci, idx);
        }
      }
      out.At(co, t) = acc;
    }
  }
  return out;
}

Matrix TransposedConv1d(const Matrix& activations, const Matrix& kernels, int stride, int out_len) {
  if (activations.rows != kernels.rows) {
    throw DimensionError("transposed_conv1d: channel count mismatch");
  }
  const int channels = activations.rows;
  const int frames = activations.cols;
  const int taps = kernels.cols;

  Matrix out(1, out_len);
  for (int c = 0; c < channels; ++c) {
    for (int t = 0; t < frames; ++t) {
      const double a = activations.At(c, t);
      for (int j = 0; j < taps; ++j) {
        const int n = t * stride + j;
        if (n >= out_len) break;
        out.At(0, n) += a * kernels.At(c, j);
      }
    }
  }
  return out;
}

Matrix Conv1dStridedGradInput(const Matrix& grad_out, const Matrix& kernels, int stride,
                              int pad_left, int in_rows, int in_cols) {
  const int taps = kernels.cols / in_rows;
  Matrix gin(in_rows, in_cols);
  for (int co = 0; co < grad_out.rows; ++co) {
    for (int t = 0; t < grad_out.cols; ++t) {
      const double g = grad_out.At(co, t);
      for (int ci = 0; ci < in_rows; ++ci) {
        for (int j = 0; j < taps; ++j) {
          const int idx = t * stride + j - pad_left;
          if (idx < 0 || idx >= in_cols) continue;
          gin.At(ci, idx) += g * kernels.At(co, ci * taps + j);
        }
      }
    }
  }
  return gin;
}

Matrix Conv1dStridedGradKernels(const Matrix& grad_out, const Matrix& input, int stride,
                                int pad_left, int kernel_cols) {
  const int taps = kernel_cols / input.rows;
  Matrix gk(grad_out.rows, kernel_cols);
  for (int co = 0; co < grad_out.rows; ++co) {
    for (int t = 0; t < grad_out.cols; ++t) {
      const double g = grad_out.At(co, t);
      for (int ci = 0; ci < input.rows; ++ci) {
        for (int j = 0; j < taps; ++j) {
          const int idx = t * stride + j - pad_left;
          if (idx < 0 || idx >= input.cols) continue;
          gk.At(co, ci * taps + j) += g * input.At(ci, idx);
        }
      }
    }
  }
  return gk;
}

Matrix Conv1dDilatedGradInput(const Matrix& grad_out, const Matrix& kernels, int dilation,
                              int in_rows, int in_cols) {
  const int taps = kernels.cols / in_rows;
  const int pad = DilatedPadLeft(taps, dilation);
  Matrix gin(in_rows, in_cols);
  for (int co = 0; co < grad_out.rows; ++co) {
    for (int t = 0; t < grad_out.cols; ++t) {
      const double g = grad_out.At(co, t);
      for (int ci = 0; ci < in_rows; ++ci) {
        for (int j = 0; j < taps; ++j) {
          const int idx = t + j * dilation - pad;
          if (idx < 0 || idx >= in_cols) continue;
          gin.At(ci, idx) += g * kernels.At(co, ci * taps + j);
        }
      }
    }
  }
  return gin;
}

Matrix Conv1dDilatedGradKernels(const Matrix& grad_out, const Matrix& input, int dilation,
                                int kernel_cols) {
  const int taps = kernel_cols / input.rows;
  const int pad = DilatedPadLeft(taps, dilation);
  Matrix gk(grad_out.rows, kernel_cols);
  for (int co = 0; co < grad_out.rows; ++co) {
    for (int t = 0; t < grad_out.cols; ++t) {
      const double g = grad_out.At(co, t);
      for (int ci = 0; ci < input.rows; ++ci) {
        for (int j = 0; j < taps; ++j) {
          const int idx = t + j * dilation - pad;
          if (idx < 0 || idx >= input.cols) continue;
          gk.At(co, ci * taps + j) += g * input.At(ci, idx);
        }
      }
    }
  }
  return gk;
}

Matrix TransposedConv1dGradActivations(const Matrix& grad_out, const Matrix& kernels,
                                       int stride, int act_rows, int act_cols) {
  const int taps = kernels.cols;
  const int out_len = grad_out.cols;
  Matrix ga(act_rows, act_cols);
  for (int c = 0; c < act_rows; ++c) {
    for (int t = 0; t < act_cols; ++t) {
      double acc = 0.0;
      for (int j = 0; j < taps; ++j) {
        const int n = t * stride + j;
        if (n >= out_len) break;
        acc += grad_out.At(0, n) * kernels.At(c, j);
      }
      ga.At(c, t) = acc;
    }
  }
  return ga;
}

Matrix TransposedConv1dGradKernels(const Matrix& grad_out, const Matrix& activations,
                                   int stride, int kernel_len) {
  const int out_len = grad_out.cols;
  Matrix gw(activations.rows, kernel_len);
  for (int c = 0; c < activations.rows; ++c) {
    for (int t = 0; t < activations.cols; ++t) {
      const double a = activations.At(c, t);
      for (int j = 0; j < kernel_len; ++j) {
        const int n = t * stride + j;
        if (n >= out_len) break;
        gw.At(c, j) += a * grad_out.At(0, n);
      }
    }
  }
  return gw;
}

}  // namespace sinedae::ref
