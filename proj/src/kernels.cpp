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

#include "sinedae/kernels.hpp"

#include <algorithm>

namespace sinedae::kern {
namespace {

int CheckKernelShape(const Matrix& input, const Matrix& kernels, const char* what) {
  if (input.rows <= 0 || kernels.rows <= 0) throw DimensionError(std::string(what) + ": empty operand");
  if (kernels.cols % input.rows != 0) {
    throw DimensionError(std::string(what) + ": kernel columns not divisible by input channels");
  }
  return kernels.cols / input.rows;
}

// m[r][c] -> out[c][r]; used to turn channel-strided reads into contiguous
// inner loops in the gradient kernels.
Matrix Transpose(const Matrix& m) {
  Matrix out(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r) {
    const double* src = m.Row(r);
    for (int c = 0; c < m.cols; ++c) out.At(c, r) = src[c];
  }
  return out;
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
#pragma omp parallel for schedule(static)
  for (int co = 0; co < cout; ++co) {
    const double* krow = kernels.Row(co);
    double* orow = out.Row(co);
    for (int t = 0; t < t_out; ++t) {
      const int base = t * stride - pad_left;
      const int j0 = std::max(0, -base);
      const int j1 = std::min(taps, n - base);
      double acc = 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        const double* x = input.Row(ci) + base;
        const double* k = krow + ci * taps;
        for (int j = j0; j < j1; ++j) acc += k[j] * x[j];
      }
      orow[t] = acc;
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
#pragma omp parallel for schedule(static)
  for (int co = 0; co < cout; ++co) {
    const double* krow = kernels.Row(co);
    double* orow = out.Row(co);
    for (int t = 0; t < n; ++t) {
      double acc = 0.0;
      for (int ci = 0; ci < cin; ++ci) {
        const double* x = input.Row(ci);
        const double* k = krow + ci * taps;
        for (int j = 0; j < taps; ++j) {
          const int idx = t + j * dilation - pad;
          if (idx < 0 || idx >= n) continue;
          acc += k[j] * x[idx];
        }
      }
      orow[t] = acc;
    }
  }
  return out;
}

Matrix TransposedConv1d(const Matrix& activations, const Matrix& kernels, int stride,
                        int out_len) {
  if (activations.rows != kernels.rows) {
    throw DimensionError("transposed_conv1d: channel count mismatch");
  }
  const int channels = activations.rows;
  const int frames = activations.cols;
  const int taps = kernels.cols;

  // Column-major copies make the per-sample channel sum contiguous.
  const Matrix at = Transpose(activations);  // frames x channels
  const Matrix wt = Transpose(kernels);      // taps x channels

  Matrix out(1, out_len);
  double* o = out.Row(0);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < out_len; ++n) {
    // valid frames t with 0 <= n - t*stride < taps
    const int t_hi = std::min(frames - 1, n / stride);
    const int t_lo = n < taps ? 0 : (n - taps) / stride + 1;
    double acc = 0.0;
    for (int t = t_lo; t <= t_hi; ++t) {
      const int j = n - t * stride;
      const double* arow = at.Row(t);
      const double* wrow = wt.Row(j);
      for (int c = 0; c < channels; ++c) acc += arow[c] * wrow[c];
    }
    o[n] = acc;
  }
  return out;
}

Matrix Conv1dStridedGradInput(const Matrix& grad_out, const Matrix& kernels, int stride,
                              int pad_left, int in_rows, int in_cols) {
  const int taps = kernels.cols / in_rows;
  const int cout = kernels.rows;
  const int t_out = grad_out.cols;
  const Matrix kt = Transpose(kernels);   // (cin*taps) x cout
  const Matrix gt = Transpose(grad_out);  // t_out x cout

  Matrix gin(in_rows, in_cols);
#pragma omp parallel for collapse(2) schedule(static)
  for (int ci = 0; ci < in_rows; ++ci) {
    for (int m = 0; m < in_cols; ++m) {
      // output frames t whose tap j = m + pad_left - t*stride hits m
      const int mp = m + pad_left;
      const int t_hi = std::min(t_out - 1, mp / stride);
      double acc = 0.0;
      for (int t = t_hi; t >= 0; --t) {
        const int j = mp - t * stride;
        if (j >= taps) break;
        const double* krow = kt.Row(ci * taps + j);
        const double* grow = gt.Row(t);
        for (int co = 0; co < cout; ++co) acc += krow[co] * grow[co];
      }
      gin.At(ci, m) = acc;
    }
  }
  return gin;
}

Matrix Conv1dStridedGradKernels(const Matrix& grad_out, const Matrix& input, int stride,
                                int pad_left, int kernel_cols) {
  const int cin = input.rows;
  const int taps = kernel_cols / cin;
  const int n = input.cols;
  const int t_out = grad_out.cols;

  Matrix gk(grad_out.rows, kernel_cols);
#pragma omp parallel for schedule(static)
  for (int co = 0; co < grad_out.rows; ++co) {
    const double* grow = grad_out.Row(co);
    double* krow = gk.Row(co);
    for (int ci = 0; ci < cin; ++ci) {
      const double* xrow = input.Row(ci);
      double* kslice = krow + ci * taps;
      for (int t = 0; t < t_out; ++t) {
        const double g = grow[t];
        if (g == 0.0) continue;
        const int base = t * stride - pad_left;
        const int j0 = std::max(0, -base);
        const int j1 = std::min(taps, n - base);
        const double* x = xrow + base;
        for (int j = j0; j < j1; ++j) kslice[j] += g * x[j];
      }
    }
  }
  return gk;
}

Matrix Conv1dDilatedGradInput(const Matrix& grad_out, const Matrix& kernels, int dilation,
                              int in_rows, int in_cols) {
  const int taps = kernels.cols / in_rows;
  const int cout = kernels.rows;
  const int pad = DilatedPadLeft(taps, dilation);
  const Matrix kt = Transpose(kernels);   // (cin*taps) x cout
  const Matrix gt = Transpose(grad_out);  // t x cout

  Matrix gin(in_rows, in_cols);
#pragma omp parallel for collapse(2) schedule(static)
  for (int ci = 0; ci < in_rows; ++ci) {
    for (int m = 0; m < in_cols; ++m) {
      double acc = 0.0;
      for (int j = 0; j < taps; ++j) {
        const int t = m - j * dilation + pad;
        if (t < 0 || t >= grad_out.cols) continue;
        const double* krow = kt.Row(ci * taps + j);
        const double* grow = gt.Row(t);
        for (int co = 0; co < cout; ++co) acc += krow[co] * grow[co];
      }
      gin.At(ci, m) = acc;
    }
  }
  return gin;
}

Matrix Conv1dDilatedGradKernels(const Matrix& grad_out, const Matrix& input, int dilation,
                                int kernel_cols) {
  const int cin = input.rows;
  const int taps = kernel_cols / cin;
  const int n = input.cols;
  const int pad = DilatedPadLeft(taps, dilation);

  Matrix gk(grad_out.rows, kernel_cols);
#pragma omp parallel for schedule(static)
  for (int co = 0; co < grad_out.rows; ++co) {
    const double* grow = grad_out.Row(co);
    double* krow = gk.Row(co);
    for (int ci = 0; ci < cin; ++ci) {
      const double* xrow = input.Row(ci);
      for (int j = 0; j < taps; ++j) {
        const int off = j * dilation - pad;
        const int t0 = std::max(0, -off);
        const int t1 = std::min(grad_out.cols, n - off);
        double acc = 0.0;
        const double* x = xrow + off;
        for (int t = t0; t < t1; ++t) acc += grow[t] * x[t];
        krow[ci * taps + j] = acc;
      }
    }
  }
  return gk;
}

Matrix TransposedConv1dGradActivations(const Matrix& grad_out, const Matrix& kernels,
                                       int stride, int act_rows, int act_cols) {
  const int taps = kernels.cols;
  const int out_len = grad_out.cols;
  const double* g = grad_out.Row(0);

  Matrix ga(act_rows, act_cols);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < act_rows; ++c) {
    const double* w = kernels.Row(c);
    double* garow = ga.Row(c);
    for (int t = 0; t < act_cols; ++t) {
      const int base = t * stride;
      const int j1 = std::min(taps, out_len - base);
      double acc = 0.0;
      const double* gslice = g + base;
      for (int j = 0; j < j1; ++j) acc += gslice[j] * w[j];
      garow[t] = acc;
    }
  }
  return ga;
}

Matrix TransposedConv1dGradKernels(const Matrix& grad_out, const Matrix& activations,
                                   int stride, int kernel_len) {
  const int out_len = grad_out.cols;
  const double* g = grad_out.Row(0);

  Matrix gw(activations.rows, kernel_len);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < activations.rows; ++c) {
    const double* arow = activations.Row(c);
    double* wrow = gw.Row(c);
    for (int t = 0; t < activations.cols; ++t) {
      const double a = arow[t];
      if (a == 0.0) continue;
      const int base = t * stride;
      const int j1 = std::min(kernel_len, out_len - base);
      const double* gslice = g + base;
      for (int j = 0; j < j1; ++j) wrow[j] += a * gslice[j];
    }
  }
  return gw;
}

Matrix Relu(const Matrix& x) {
  Matrix out(x.rows, x.cols);
  const std::size_t n = x.Size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
  return out;
}

Matrix ReluGrad(const Matrix& grad_out, const Matrix& x) {
  CheckSameShape(grad_out, x, "relu_grad");
  Matrix out(x.rows, x.cols);
  const std::size_t n = x.Size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out.data[i] = x.data[i] > 0.0 ? grad_out.data[i] : 0.0;
  return out;
}

Matrix Add(const Matrix& a, const Matrix& b) {
  CheckSameShape(a, b, "add");
  Matrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.Size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

Matrix Hadamard(const Matrix& a, const Matrix& b) {
  CheckSameShape(a, b, "hadamard");
  Matrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.Size(); ++i) out.data[i] = a.data[i] * b.data[i];
  return out;
}

Matrix Scale(const Matrix& a, double s) {
  Matrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.Size(); ++i) out.data[i] = a.data[i] * s;
  return out;
}

}  // namespace sinedae::kern
