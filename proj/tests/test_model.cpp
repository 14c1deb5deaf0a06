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

#include <cmath>

#include "sinedae/kernels.hpp"
#include "sinedae/model.hpp"
#include "sinedae/rng.hpp"
#include "sinedae/verification.hpp"

using namespace sinedae;

namespace {

ModelHyper TinyHyper() {
  ModelHyper h;
  h.channels = 8;
  h.kernel_len = 32;
  h.dilated_len = 3;
  h.stride = 8;
  h.dilation = 2;
  return h;
}

Matrix RandomSignal(int n, Rng& rng) {
  Matrix x(1, n);
  for (double& v : x.data) v = rng.Uniform(-0.8, 0.8);
  return x;
}

std::vector<double> Autoencode(const Model& model, const Matrix& x) {
  return Decode(model, Encode(model, x), x.cols).data;
}

}  // namespace

TEST_CASE("encode maps zero input to the zero representation") {
  const Model model = InitModel(TinyHyper(), DecoderKind::kModCos, true, 1);
  const Matrix a = Encode(model, Matrix(1, 64));
  for (double v : a.data) CHECK(v == 0.0);
}

TEST_CASE("encode shape law and non-negativity over random (N, S)") {
  Rng rng(61);
  for (int rep = 0; rep < 12; ++rep) {
    ModelHyper h = TinyHyper();
    h.stride = static_cast<int>(rng.UniformInt(2, 16));
    const int n = static_cast<int>(rng.UniformInt(h.kernel_len, 300));
    const Model model = InitModel(h, DecoderKind::kModCos, true, rep);
    const Matrix x = RandomSignal(n, rng);
    const Matrix a = Encode(model, x);
    CHECK(a.rows == h.channels);
    CHECK(a.cols == (n + h.stride - 1) / h.stride);
    double min_v = 1.0;
    for (double v : a.data) min_v = std::min(min_v, v);
    CHECK(min_v >= 0.0);
  }
}

TEST_CASE("full-scale encode emits an 800 x 173 representation") {
  ModelHyper h;  // reference hyperparameters
  const Model model = InitModel(h, DecoderKind::kModCos, true, 2);
  Rng rng(62);
  const Matrix a = Encode(model, RandomSignal(44100, rng));
  CHECK(a.rows == 800);
  CHECK(a.cols == 173);
}

TEST_CASE("parameter count matches the published model sizes") {
  ModelHyper h;  // C=800, L=2048, L'=5
  Model mod_cos = InitModel(h, DecoderKind::kModCos, true, 0);
  CHECK(ParameterCount(mod_cos) == 6478400u);  // 6.478M
  Model conv = InitModel(h, DecoderKind::kConv, true, 0);
  CHECK(ParameterCount(conv) == 6476800u);  // 6.476M
  ModelHyper h952 = h;
  h952.channels = 952;
  Model cos = InitModel(h952, DecoderKind::kCos, true, 0);
  CHECK(ParameterCount(cos) == 6483120u);  // 6.483M
}

TEST_CASE("kernel bank analytic cases") {
  ModelHyper h = TinyHyper();
  h.channels = 1;
  h.kernel_len = 8;
  Model m = InitModel(h, DecoderKind::kModCos, true, 3);
  for (double& v : m.env.data) v = 1.0;

  m.freq.At(0, 0) = 0.0;
  m.phase.At(0, 0) = 0.0;
  Matrix w = BuildKernels(m);
  for (double v : w.data) CHECK(v == 1.0);  // cos(0) = 1

  m.phase.At(0, 0) = M_PI / 2.0;
  w = BuildKernels(m);
  for (double v : w.data) CHECK(std::fabs(v) <= 1e-12);  // quadrature phase

  m.freq.At(0, 0) = 0.5;  // squared frequency 0.25: quarter cycle per sample
  m.phase.At(0, 0) = 0.0;
  w = BuildKernels(m);
  const double expected[] = {1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0};
  for (int i = 0; i < 8; ++i) CHECK(w.At(0, i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("squaring flag switches the carrier between f^2 and f") {
  ModelHyper h = TinyHyper();
  h.channels = 1;
  h.kernel_len = 4;
  Model squared = InitModel(h, DecoderKind::kModCos, true, 4);
  Model plain = InitModel(h, DecoderKind::kModCos, false, 4);
  for (Model* m : {&squared, &plain}) {
    for (double& v : m->env.data) v = 1.0;
    m->freq.At(0, 0) = 0.3;
    m->phase.At(0, 0) = 0.0;
  }
  const Matrix ws = BuildKernels(squared);
  const Matrix wp = BuildKernels(plain);
  for (int i = 0; i < 4; ++i) {
    CHECK(ws.At(0, i) == doctest::Approx(std::cos(2.0 * M_PI * 0.09 * i)).epsilon(1e-12));
    CHECK(wp.At(0, i) == doctest::Approx(std::cos(2.0 * M_PI * 0.3 * i)).epsilon(1e-12));
  }
}

TEST_CASE("decoder variants expose the right parameter sets") {
  const ModelHyper h = TinyHyper();
  Model mod_cos = InitModel(h, DecoderKind::kModCos, true, 5);
  Model cos = InitModel(h, DecoderKind::kCos, true, 5);
  Model conv = InitModel(h, DecoderKind::kConv, true, 5);

  auto names = [](Model& m) {
    std::vector<std::string> out;
    for (const ParamRef& p : TrainableParams(m)) out.push_back(p.name);
    return out;
  };
  CHECK(names(mod_cos) == std::vector<std::string>{"conv1", "conv2", "freq", "phase", "env"});
  CHECK(names(cos) == std::vector<std::string>{"conv1", "conv2", "freq", "phase"});
  CHECK(names(conv) == std::vector<std::string>{"conv1", "conv2", "kernels"});

  // frozen unit envelope for the cos variant
  for (double v : cos.env.data) CHECK(v == 1.0);
  // direct parameterization: decoder holds C*L reals
  std::size_t dec_count = 0;
  for (const ParamRef& p : TrainableParams(conv)) {
    if (p.name == "kernels") dec_count = p.value->Size();
  }
  CHECK(dec_count == static_cast<std::size_t>(h.channels) * h.kernel_len);
  CHECK_THROWS_AS(ParseDecoderKind("sinc"), ConfigError);
}

TEST_CASE("sort_kernels orders squared frequencies and is idempotent") {
  ModelHyper h = TinyHyper();
  h.channels = 3;
  Model m = InitModel(h, DecoderKind::kModCos, true, 6);
  m.freq.data = {std::sqrt(0.3), std::sqrt(0.1), std::sqrt(0.2)};

  const std::vector<int> perm = SortKernels(m);
  CHECK(perm == std::vector<int>{1, 2, 0});
  CHECK(m.freq.At(0, 0) == doctest::Approx(std::sqrt(0.1)));
  CHECK(m.freq.At(2, 0) == doctest::Approx(std::sqrt(0.3)));

  const Model before = m;
  const std::vector<int> again = SortKernels(m);
  CHECK(again == std::vector<int>{0, 1, 2});  // already sorted: identity
  CHECK(m.conv1.data == before.conv1.data);
  CHECK(m.conv2.data == before.conv2.data);
  CHECK(m.freq.data == before.freq.data);
}

TEST_CASE("sorting with co-permutation preserves the end-to-end map") {
  Rng rng(63);
  Model m = InitModel(TinyHyper(), DecoderKind::kModCos, true, 7);
  rng.Shuffle(m.freq.data);  // unsorted frequencies

  const Matrix x = RandomSignal(200, rng);
  const std::vector<double> before = Autoencode(m, x);
  SortKernels(m);
  const std::vector<double> after = Autoencode(m, x);

  double f2_prev = -1.0;
  for (int c = 0; c < m.Channels(); ++c) {
    const double f2 = m.freq.At(c, 0) * m.freq.At(c, 0);
    CHECK(f2 >= f2_prev);
    f2_prev = f2;
  }
  double max_diff = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    max_diff = std::max(max_diff, std::fabs(before[i] - after[i]));
  }
  CHECK(max_diff <= 1e-9);
}

TEST_CASE("sorting without co-permutation changes the end-to-end map") {
  Rng rng(64);
  Model m = InitModel(TinyHyper(), DecoderKind::kModCos, true, 8);
  rng.Shuffle(m.freq.data);
  const Matrix x = RandomSignal(200, rng);
  const std::vector<double> before = Autoencode(m, x);
  SortKernels(m, /*co_permute=*/false);
  const std::vector<double> after = Autoencode(m, x);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    max_diff = std::max(max_diff, std::fabs(before[i] - after[i]));
  }
  CHECK(max_diff > 1e-6);  // decoder-only sorting is not function-preserving
}

TEST_CASE("decode is linear and synthesizes single atoms") {
  ModelHyper h = TinyHyper();
  h.channels = 2;
  h.kernel_len = 16;
  h.stride = 4;
  Model m = InitModel(h, DecoderKind::kModCos, true, 9);
  for (double& v : m.env.data) v = 1.0;
  m.freq.data = {0.0, 0.5};
  m.phase.data = {0.0, 0.0};

  const int n = 40;
  const int frames = kern::OutputFrames(n, h.stride);

  Matrix zero(h.channels, frames);
  for (double v : Decode(m, zero, n).data) CHECK(v == 0.0);

  Matrix one_hot(h.channels, frames);
  one_hot.At(1, 2) = 1.0;  // kernel 1 placed at sample 2*stride
  const Matrix out = Decode(m, one_hot, n);
  for (int i = 0; i < n; ++i) {
    const int j = i - 2 * h.stride;
    const double expected =
        j >= 0 && j < h.kernel_len ? std::cos(2.0 * M_PI * 0.25 * j) : 0.0;
    CHECK(out.At(0, i) == doctest::Approx(expected).epsilon(1e-12));
  }

  Rng rng(65);
  Matrix r1(h.channels, frames);
  Matrix r2(h.channels, frames);
  for (double& v : r1.data) v = rng.Uniform(0.0, 1.0);
  for (double& v : r2.data) v = rng.Uniform(0.0, 1.0);
  Matrix sum(h.channels, frames);
  for (std::size_t i = 0; i < sum.Size(); ++i) sum.data[i] = r1.data[i] + r2.data[i];
  const Matrix d1 = Decode(m, r1, n);
  const Matrix d2 = Decode(m, r2, n);
  const Matrix ds = Decode(m, sum, n);
  for (int i = 0; i < n; ++i) {
    CHECK(ds.At(0, i) == doctest::Approx(d1.At(0, i) + d2.At(0, i)).epsilon(1e-10));
  }
}

TEST_CASE("dimension errors are rejected") {
  const Model m = InitModel(TinyHyper(), DecoderKind::kModCos, true, 10);
  CHECK_THROWS_AS(Encode(m, Matrix(2, 64)), DimensionError);
  CHECK_THROWS_AS(Decode(m, Matrix(3, 8), 64), DimensionError);       // wrong channels
  CHECK_THROWS_AS(Decode(m, Matrix(8, 9), 64), DimensionError);       // wrong frame count
}

TEST_CASE("frozen envelope of the cos variant receives no gradient path") {
  const ModelHyper h = TinyHyper();
  const Model m = InitModel(h, DecoderKind::kCos, true, 11);
  Tape tape;
  const ModelVars vars = RegisterParams(tape, m);
  CHECK_FALSE(tape.RequiresGrad(vars.env));
  CHECK(tape.RequiresGrad(vars.freq));
}

TEST_CASE("gradcheck of the full objective on the tiny configuration (mod-cos)") {
  ModelLossCase c = MakeTinyModelCase(TinyHyper(), 256, DecoderKind::kModCos, true, 0.5,
                                      RegTarget::kMix, 100);
  GradCheckProblem p = c.Problem();
  const GradCheckReport report = GradCheck(p, 1e-5, 1e-4);
  for (const GradCheckEntry& e : report.entries) {
    INFO(e.name, " max_rel_err=", e.max_rel_err);
    CHECK(e.pass);
  }
}
