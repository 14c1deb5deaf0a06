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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "sinedae/gradcheck.hpp"
#include "sinedae/kernels.hpp"
#include "sinedae/reference.hpp"
#include "sinedae/rng.hpp"
#include "sinedae/tape.hpp"

using namespace sinedae;

namespace {

Matrix RandomMatrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.Uniform(-scale, scale);
  return m;
}

double Dot(const Matrix& a, const Matrix& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.Size(); ++i) acc += a.data[i] * b.data[i];
  return acc;
}

// Test-local scalar reduction; also exercises the Custom extension point.
Tape::Var SumOnTape(Tape& tape, Tape::Var x) {
  const Matrix& v = tape.Value(x);
  Matrix out(1, 1);
  for (double d : v.data) out.At(0, 0) += d;
  return tape.Custom({x}, out, [](Tape& t, const std::vector<Tape::Var>& in, Tape::Var o) {
    const double g = t.GradOf(o).At(0, 0);
    const Matrix& val = t.Value(in[0]);
    Matrix grad(val.rows, val.cols);
    for (double& d : grad.data) d = g;
    t.AccumulateGrad(in[0], grad);
  });
}

Tape::Var SquaredNormOnTape(Tape& tape, Tape::Var x) {
  const Matrix& v = tape.Value(x);
  Matrix out(1, 1);
  for (double d : v.data) out.At(0, 0) += d * d;
  return tape.Custom({x}, out, [](Tape& t, const std::vector<Tape::Var>& in, Tape::Var o) {
    const double g = t.GradOf(o).At(0, 0);
    const Matrix& val = t.Value(in[0]);
    Matrix grad(val.rows, val.cols);
    for (std::size_t i = 0; i < val.Size(); ++i) grad.data[i] = 2.0 * g * val.data[i];
    t.AccumulateGrad(in[0], grad);
  });
}

}  // namespace

TEST_CASE("output frame law T = ceil(N/S)") {
  CHECK(kern::OutputFrames(44100, 256) == 173);
  CHECK(ref::OutputFrames(44100, 256) == 173);
  CHECK(kern::OutputFrames(44100, 44100) == 1);
  CHECK(kern::OutputFrames(1, 256) == 1);
}

TEST_CASE("strided conv: impulse response follows cross-correlation") {
  const int n = 8;
  Matrix impulse(1, n);
  impulse.At(0, 0) = 1.0;

  // L = 1: output[t] = k[0] * x[t]
  Matrix k1(1, 1);
  k1.At(0, 0) = 3.5;
  const Matrix out1 = kern::Conv1dStrided(impulse, k1, 1, 0);
  CHECK(out1.At(0, 0) == 3.5);
  for (int t = 1; t < n; ++t) CHECK(out1.At(0, t) == 0.0);

  // impulse at position L-1 reads the kernel out reversed
  const int klen = 4;
  Matrix shifted(1, n);
  shifted.At(0, klen - 1) = 1.0;
  Rng rng(1);
  const Matrix k = RandomMatrix(1, klen, rng);
  const Matrix out = kern::Conv1dStrided(shifted, k, 1, 0);
  for (int t = 0; t < klen; ++t) CHECK(out.At(0, t) == k.At(0, klen - 1 - t));
}

TEST_CASE("strided conv matches the brute-force oracle on the spec instance") {
  Rng rng(21);
  const Matrix input = RandomMatrix(2, 17, rng);
  const Matrix kernels = RandomMatrix(3, 2 * 5, rng);
  for (int pad : {0, ref::SamePadLeft(17, 5, 3)}) {
    const Matrix got = kern::Conv1dStrided(input, kernels, 3, pad);
    const Matrix want = ref::Conv1dStrided(input, kernels, 3, pad);
    CHECK(got.rows == 3);
    CHECK(got.cols == ref::OutputFrames(17, 3));
    CHECK(got.MaxAbsDiff(want) <= 1e-12);
  }
}

TEST_CASE("dilated conv with D=1 reduces to the stride-1 conv") {
  Rng rng(22);
  for (int lp : {3, 5, 4}) {
    const Matrix input = RandomMatrix(2, 19, rng);
    const Matrix kernels = RandomMatrix(2, 2 * lp, rng);
    const Matrix dil = kern::Conv1dDilated(input, kernels, 1);
    const Matrix conv = kern::Conv1dStrided(input, kernels, 1, kern::SamePadLeft(19, lp, 1));
    CHECK(dil.MaxAbsDiff(conv) <= 1e-12);
  }
}

TEST_CASE("dilated conv receptive field spans (L'-1)*D + 1 frames") {
  const int t_len = 100;
  const int lp = 5;
  const int dilation = 10;
  Matrix impulse(1, t_len);
  impulse.At(0, t_len / 2) = 1.0;
  Rng rng(23);
  const Matrix kernels = RandomMatrix(1, lp, rng);
  const Matrix out = kern::Conv1dDilated(impulse, kernels, dilation);
  int lo = t_len, hi = -1;
  for (int t = 0; t < t_len; ++t) {
    if (out.At(0, t) != 0.0) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  CHECK(hi - lo + 1 == (lp - 1) * dilation + 1);  // 41 frames
}

TEST_CASE("transposed conv places single atoms and is zero on zero input") {
  const int channels = 2, frames = 3, klen = 5, stride = 4, n = 14;
  Rng rng(24);
  const Matrix kernels = RandomMatrix(channels, klen, rng);

  Matrix acts(channels, frames);
  acts.At(0, 0) = 1.0;
  const Matrix out = kern::TransposedConv1d(acts, kernels, stride, n);
  for (int i = 0; i < n; ++i) {
    CHECK(out.At(0, i) == (i < klen ? kernels.At(0, i) : 0.0));
  }

  const Matrix zero_out = kern::TransposedConv1d(Matrix(channels, frames), kernels, stride, n);
  for (double v : zero_out.data) CHECK(v == 0.0);
}

TEST_CASE("transposed conv matches the brute-force oracle on the spec instance") {
  Rng rng(25);
  const Matrix acts = RandomMatrix(3, 4, rng);
  const Matrix kernels = RandomMatrix(3, 8, rng);
  const Matrix got = kern::TransposedConv1d(acts, kernels, 4, 16);
  const Matrix want = ref::TransposedConv1d(acts, kernels, 4, 16);
  CHECK(got.MaxAbsDiff(want) <= 1e-12);
}

TEST_CASE("all conv kernels match their serial oracles on random small instances") {
  Rng rng(26);
  int instances = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int cin = static_cast<int>(rng.UniformInt(1, 3));
    const int cout = static_cast<int>(rng.UniformInt(1, 4));
    const int n = static_cast<int>(rng.UniformInt(4, 64));
    const int klen = static_cast<int>(rng.UniformInt(1, std::min(12, n)));
    const int stride = static_cast<int>(rng.UniformInt(1, 4));
    const Matrix input = RandomMatrix(cin, n, rng);
    const Matrix kernels = RandomMatrix(cout, cin * klen, rng);
    const int pad = rng.Uniform() < 0.5 ? 0 : ref::SamePadLeft(n, klen, stride);
    CHECK(kern::Conv1dStrided(input, kernels, stride, pad)
              .MaxAbsDiff(ref::Conv1dStrided(input, kernels, stride, pad)) <= 1e-12);
    ++instances;

    const int dilation = static_cast<int>(rng.UniformInt(1, 4));
    const Matrix dk = RandomMatrix(cout, cin * klen, rng);
    CHECK(kern::Conv1dDilated(input, dk, dilation)
              .MaxAbsDiff(ref::Conv1dDilated(input, dk, dilation)) <= 1e-12);
    ++instances;

    const int frames = static_cast<int>(rng.UniformInt(1, 8));
    const int out_len = static_cast<int>(rng.UniformInt(klen, 64));
    const Matrix acts = RandomMatrix(cout, frames, rng);
    const Matrix tk = RandomMatrix(cout, klen, rng);
    CHECK(kern::TransposedConv1d(acts, tk, stride, out_len)
              .MaxAbsDiff(ref::TransposedConv1d(acts, tk, stride, out_len)) <= 1e-12);
    ++instances;
  }
  CHECK(instances >= 100);
}

TEST_CASE("backward kernels match the scatter-style serial backward") {
  Rng rng(27);
  for (int rep = 0; rep < 10; ++rep) {
    const int cin = static_cast<int>(rng.UniformInt(1, 3));
    const int cout = static_cast<int>(rng.UniformInt(1, 3));
    const int n = static_cast<int>(rng.UniformInt(6, 40));
    const int klen = static_cast<int>(rng.UniformInt(1, 6));
    const int stride = static_cast<int>(rng.UniformInt(1, 3));
    const int pad = ref::SamePadLeft(n, klen, stride);
    const int t_out = ref::OutputFrames(n, stride);
    const Matrix input = RandomMatrix(cin, n, rng);
    const Matrix kernels = RandomMatrix(cout, cin * klen, rng);
    const Matrix gout = RandomMatrix(cout, t_out, rng);

    CHECK(kern::Conv1dStridedGradInput(gout, kernels, stride, pad, cin, n)
              .MaxAbsDiff(ref::Conv1dStridedGradInput(gout, kernels, stride, pad, cin, n)) <=
          1e-12);
    CHECK(kern::Conv1dStridedGradKernels(gout, input, stride, pad, cin * klen)
              .MaxAbsDiff(ref::Conv1dStridedGradKernels(gout, input, stride, pad, cin * klen)) <=
          1e-12);

    const int dilation = static_cast<int>(rng.UniformInt(1, 4));
    const Matrix dgout = RandomMatrix(cout, n, rng);
    CHECK(kern::Conv1dDilatedGradInput(dgout, kernels, dilation, cin, n)
              .MaxAbsDiff(ref::Conv1dDilatedGradInput(dgout, kernels, dilation, cin, n)) <= 1e-12);
    CHECK(kern::Conv1dDilatedGradKernels(dgout, input, dilation, cin * klen)
              .MaxAbsDiff(ref::Conv1dDilatedGradKernels(dgout, input, dilation, cin * klen)) <=
          1e-12);

    const int frames = static_cast<int>(rng.UniformInt(1, 6));
    const int out_len = static_cast<int>(rng.UniformInt(klen, 48));
    const Matrix acts = RandomMatrix(cout, frames, rng);
    const Matrix tk = RandomMatrix(cout, klen, rng);
    const Matrix tgout = RandomMatrix(1, out_len, rng);
    CHECK(kern::TransposedConv1dGradActivations(tgout, tk, stride, cout, frames)
              .MaxAbsDiff(ref::TransposedConv1dGradActivations(tgout, tk, stride, cout, frames)) <=
          1e-12);
    CHECK(kern::TransposedConv1dGradKernels(tgout, acts, stride, klen)
              .MaxAbsDiff(ref::TransposedConv1dGradKernels(tgout, acts, stride, klen)) <= 1e-12);
  }
}

TEST_CASE("convolutions are linear") {
  Rng rng(28);
  for (int rep = 0; rep < 5; ++rep) {
    const double a = rng.Uniform(-2.0, 2.0);
    const double b = rng.Uniform(-2.0, 2.0);
    const Matrix x = RandomMatrix(2, 30, rng);
    const Matrix y = RandomMatrix(2, 30, rng);
    const Matrix k = RandomMatrix(3, 2 * 4, rng);
    Matrix mix(2, 30);
    for (std::size_t i = 0; i < mix.Size(); ++i) mix.data[i] = a * x.data[i] + b * y.data[i];

    const Matrix lhs = kern::Conv1dStrided(mix, k, 2, 1);
    const Matrix fx = kern::Conv1dStrided(x, k, 2, 1);
    const Matrix fy = kern::Conv1dStrided(y, k, 2, 1);
    for (std::size_t i = 0; i < lhs.Size(); ++i) {
      CHECK(lhs.data[i] == doctest::Approx(a * fx.data[i] + b * fy.data[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("transposed conv is the adjoint of the zero-pad analysis conv") {
  Rng rng(29);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = static_cast<int>(rng.UniformInt(10, 50));
    const int klen = static_cast<int>(rng.UniformInt(2, 8));
    const int stride = static_cast<int>(rng.UniformInt(1, 4));
    const int cout = static_cast<int>(rng.UniformInt(1, 4));
    const int t_out = ref::OutputFrames(n, stride);
    const Matrix x = RandomMatrix(1, n, rng);
    const Matrix w = RandomMatrix(cout, klen, rng);
    const Matrix y = RandomMatrix(cout, t_out, rng);

    const Matrix fx = kern::Conv1dStrided(x, w, stride, 0);
    const Matrix gy = kern::TransposedConv1d(y, w, stride, n);
    CHECK(Dot(fx, y) == doctest::Approx(Dot(x, gy)).epsilon(1e-10));
  }
}

TEST_CASE("relu forward and dead-region backward") {
  Matrix x(1, 3, {-1.0, 0.0, 2.0});
  const Matrix y = kern::Relu(x);
  CHECK(y.data == std::vector<double>{0.0, 0.0, 2.0});

  Tape tape;
  const Tape::Var p = tape.Param(Matrix(1, 4, {-3.0, -0.5, -1e-9, -100.0}));
  const Tape::Var loss = SumOnTape(tape, tape.Relu(p));
  tape.Backward(loss);
  CHECK(tape.Value(loss).At(0, 0) == 0.0);
  for (double g : tape.GradOf(p).data) CHECK(g == 0.0);
}

TEST_CASE("sum of relu over positive input has unit gradients") {
  Tape tape;
  const Tape::Var p = tape.Param(Matrix(2, 2, {1.0, 2.0, 3.0, 4.0}));
  const Tape::Var loss = SumOnTape(tape, tape.Relu(p));
  tape.Backward(loss);
  for (double g : tape.GradOf(p).data) CHECK(g == 1.0);
}

TEST_CASE("relu gradcheck away from the kink") {
  Rng rng(30);
  Matrix x(2, 6);
  for (double& v : x.data) {
    v = rng.Uniform(0.2, 1.0) * (rng.Uniform() < 0.5 ? -1.0 : 1.0);  // no values near 0
  }
  GradCheckProblem problem;
  problem.params = {{"x", &x}};
  problem.loss = [&x]() {
    Tape t;
    const Tape::Var p = t.Param(x);
    return t.Value(SquaredNormOnTape(t, t.Relu(p))).At(0, 0);
  };
  problem.grads = [&x]() {
    Tape t;
    const Tape::Var p = t.Param(x);
    const Tape::Var loss = SquaredNormOnTape(t, t.Relu(p));
    t.Backward(loss);
    return std::vector<Matrix>{t.GradOf(p)};
  };
  const GradCheckReport report = GradCheck(problem, 1e-5, 1e-4);
  CHECK(report.all_pass);
}

TEST_CASE("conv loss gradient matches central finite differences") {
  Rng rng(31);
  Matrix x = RandomMatrix(1, 5, rng);
  Matrix k = RandomMatrix(2, 3, rng);
  const int stride = 1;
  const int pad = 1;

  GradCheckProblem problem;
  problem.params = {{"input", &x}, {"kernels", &k}};
  auto build = [&](Tape& t, Tape::Var& xp, Tape::Var& kp) {
    xp = t.Param(x);
    kp = t.Param(k);
    return SquaredNormOnTape(t, t.Conv1dStrided(xp, kp, stride, pad));
  };
  problem.loss = [&]() {
    Tape t;
    Tape::Var xp, kp;
    return t.Value(build(t, xp, kp)).At(0, 0);
  };
  problem.grads = [&]() {
    Tape t;
    Tape::Var xp, kp;
    const Tape::Var loss = build(t, xp, kp);
    t.Backward(loss);
    return std::vector<Matrix>{t.GradOf(xp), t.GradOf(kp)};
  };
  const GradCheckReport report = GradCheck(problem, 1e-5, 1e-4);
  REQUIRE(report.entries.size() == 2);
  CHECK(report.all_pass);
}

TEST_CASE("backward is deterministic and thread-count independent") {
  Rng rng(32);
  const Matrix x = RandomMatrix(1, 200, rng);
  const Matrix k = RandomMatrix(8, 16, rng);

  auto run = [&]() {
    Tape t;
    const Tape::Var xp = t.Constant(x);
    const Tape::Var kp = t.Param(k);
    const Tape::Var loss = SquaredNormOnTape(t, t.Relu(t.Conv1dStrided(xp, kp, 4, 2)));
    t.Backward(loss);
    return t.GradOf(kp);
  };

  const Matrix g1 = run();
  const Matrix g2 = run();
  CHECK(g1.data == g2.data);  // bitwise

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Matrix g_serial = run();
  omp_set_num_threads(saved);
  CHECK(g1.data == g_serial.data);  // schedule independence
}

TEST_CASE("backward before forward is a state error") {
  Tape tape;
  CHECK_THROWS_AS(tape.Backward(0), StateError);
}

TEST_CASE("gradcheck verifies a quadratic and flags a corrupted backward") {
  Matrix p(1, 1, {3.0});
  GradCheckProblem good;
  good.params = {{"p", &p}};
  good.loss = [&p]() { return p.At(0, 0) * p.At(0, 0); };
  good.grads = [&p]() { return std::vector<Matrix>{Matrix(1, 1, {2.0 * p.At(0, 0)})}; };
  const GradCheckReport ok = GradCheck(good, 1e-5, 1e-4);
  CHECK(ok.all_pass);
  CHECK(ok.entries[0].max_rel_err < 1e-8);

  GradCheckProblem bad = good;
  bad.grads = [&p]() { return std::vector<Matrix>{Matrix(1, 1, {-2.0 * p.At(0, 0)})}; };
  const GradCheckReport flagged = GradCheck(bad, 1e-5, 1e-4);  // must report, not throw
  CHECK_FALSE(flagged.all_pass);
}
