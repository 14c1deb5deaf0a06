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
//
// Times the serial reference kernels against the OpenMP kernels on
// encoder-sized problems and checks that both agree.

#include <omp.h>

#include <cstdio>
#include <functional>

#include "sinedae/kernels.hpp"
#include "sinedae/reference.hpp"
#include "sinedae/rng.hpp"

namespace {

using namespace sinedae;

Matrix RandomMatrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.Uniform(-1.0, 1.0);
  return m;
}

struct Result {
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  double max_diff = 0.0;
};

Result TimePair(const std::function<Matrix()>& serial, const std::function<Matrix()>& parallel,
                int reps) {
  Result r;
  Matrix ref_out, par_out;
  double t0 = omp_get_wtime();
  for (int i = 0; i < reps; ++i) ref_out = serial();
  r.serial_ms = (omp_get_wtime() - t0) * 1000.0 / reps;
  t0 = omp_get_wtime();
  for (int i = 0; i < reps; ++i) par_out = parallel();
  r.parallel_ms = (omp_get_wtime() - t0) * 1000.0 / reps;
  r.max_diff = ref_out.MaxAbsDiff(par_out);
  return r;
}

void Report(const char* name, const Result& r) {
  std::printf("%-28s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   max|diff| %.3g\n",
              name, r.serial_ms, r.parallel_ms,
              r.parallel_ms > 0.0 ? r.serial_ms / r.parallel_ms : 0.0, r.max_diff);
}

}  // namespace

int main() {
  std::printf("kernel benchmark, %d OpenMP threads\n", omp_get_max_threads());

  Rng rng(7);
  // desk-scale encoder shape: C=64, L=512, S=128, L'=5, D=10, N=44100
  const int n = 44100;
  const int channels = 64;
  const int klen = 512;
  const int stride = 128;
  const int dlen = 5;
  const int dilation = 10;
  const int frames = kern::OutputFrames(n, stride);
  const int pad = kern::SamePadLeft(n, klen, stride);

  const Matrix signal = RandomMatrix(1, n, rng);
  const Matrix conv1 = RandomMatrix(channels, klen, rng);
  const Matrix hidden = RandomMatrix(channels, frames, rng);
  const Matrix conv2 = RandomMatrix(channels, channels * dlen, rng);
  const Matrix acts = RandomMatrix(channels, frames, rng);
  const Matrix kernels = RandomMatrix(channels, klen, rng);
  const Matrix grad_frames = RandomMatrix(channels, frames, rng);
  const Matrix grad_signal = RandomMatrix(1, n, rng);

  const int reps = 20;
  Report("conv1d_strided fwd",
         TimePair([&] { return ref::Conv1dStrided(signal, conv1, stride, pad); },
                  [&] { return kern::Conv1dStrided(signal, conv1, stride, pad); }, reps));
  Report("conv1d_dilated fwd",
         TimePair([&] { return ref::Conv1dDilated(hidden, conv2, dilation); },
                  [&] { return kern::Conv1dDilated(hidden, conv2, dilation); }, reps));
  Report("transposed_conv1d fwd",
         TimePair([&] { return ref::TransposedConv1d(acts, kernels, stride, n); },
                  [&] { return kern::TransposedConv1d(acts, kernels, stride, n); }, reps));
  Report("conv1d_strided grad_k",
         TimePair(
             [&] { return ref::Conv1dStridedGradKernels(grad_frames, signal, stride, pad, klen); },
             [&] { return kern::Conv1dStridedGradKernels(grad_frames, signal, stride, pad, klen); },
             reps));
  Report("conv1d_dilated grad_in",
         TimePair(
             [&] { return ref::Conv1dDilatedGradInput(grad_frames, conv2, dilation, channels, frames); },
             [&] { return kern::Conv1dDilatedGradInput(grad_frames, conv2, dilation, channels, frames); },
             reps));
  Report("conv1d_dilated grad_k",
         TimePair(
             [&] { return ref::Conv1dDilatedGradKernels(grad_frames, hidden, dilation, channels * dlen); },
             [&] { return kern::Conv1dDilatedGradKernels(grad_frames, hidden, dilation, channels * dlen); },
             reps));
  Report("transposed grad_acts",
         TimePair(
             [&] { return ref::TransposedConv1dGradActivations(grad_signal, kernels, stride, channels, frames); },
             [&] { return kern::TransposedConv1dGradActivations(grad_signal, kernels, stride, channels, frames); },
             reps));
  Report("transposed grad_k",
         TimePair(
             [&] { return ref::TransposedConv1dGradKernels(grad_signal, acts, stride, klen); },
             [&] { return kern::TransposedConv1dGradKernels(grad_signal, acts, stride, klen); },
             reps));
  return 0;
}
