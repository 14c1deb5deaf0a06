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

#include "sinedae/tape.hpp"

#include "sinedae/kernels.hpp"

namespace sinedae {

Tape::Var Tape::PushSlot(Matrix value, bool requires_grad) {
  slots_.push_back(Slot{std::move(value), Matrix(), requires_grad});
  return static_cast<Var>(slots_.size()) - 1;
}

Tape::Var Tape::PushNode(std::vector<Var> inputs, Matrix value, BackwardFn backward) {
  const bool req = AnyRequires(inputs);
  const Var out = PushSlot(std::move(value), req);
  nodes_.push_back(Node{std::move(inputs), out, std::move(backward)});
  return out;
}

bool Tape::AnyRequires(const std::vector<Var>& vars) const {
  for (Var v : vars) {
    if (slots_[v].requires_grad) return true;
  }
  return false;
}

Tape::Var Tape::Constant(Matrix value) { return PushSlot(std::move(value), false); }

Tape::Var Tape::Param(Matrix value) { return PushSlot(std::move(value), true); }

const Matrix& Tape::GradOf(Var v) const {
  if (!backward_ran_) throw StateError("gradient requested before backward");
  if (!slots_[v].requires_grad) throw StateError("gradient requested for a non-grad variable");
  return slots_[v].grad;
}

void Tape::AccumulateGrad(Var v, const Matrix& delta) {
  Slot& s = slots_[v];
  if (!s.requires_grad) return;
  CheckSameShape(s.grad, delta, "accumulate_grad");
  for (std::size_t i = 0; i < delta.Size(); ++i) s.grad.data[i] += delta.data[i];
}

Tape::Var Tape::Conv1dStrided(Var input, Var kernels, int stride, int pad_left) {
  Matrix out = kern::Conv1dStrided(Value(input), Value(kernels), stride, pad_left);
  return PushNode({input, kernels}, std::move(out),
                  [stride, pad_left](Tape& t, const std::vector<Var>& in, Var out_var) {
                    const Matrix& g = t.slots_[out_var].grad;
                    const Matrix& x = t.Value(in[0]);
                    const Matrix& k = t.Value(in[1]);
                    if (t.RequiresGrad(in[0])) {
                      t.AccumulateGrad(in[0], kern::Conv1dStridedGradInput(
                                                  g, k, stride, pad_left, x.rows, x.cols));
                    }
                    if (t.RequiresGrad(in[1])) {
                      t.AccumulateGrad(in[1], kern::Conv1dStridedGradKernels(
                                                  g, x, stride, pad_left, k.cols));
                    }
                  });
}

Tape::Var Tape::Conv1dDilated(Var input, Var kernels, int dilation) {
  Matrix out = kern::Conv1dDilated(Value(input), Value(kernels), dilation);
  return PushNode({input, kernels}, std::move(out),
                  [dilation](Tape& t, const std::vector<Var>& in, Var out_var) {
                    const Matrix& g = t.slots_[out_var].grad;
                    const Matrix& x = t.Value(in[0]);
                    const Matrix& k = t.Value(in[1]);
                    if (t.RequiresGrad(in[0])) {
                      t.AccumulateGrad(in[0], kern::Conv1dDilatedGradInput(g, k, dilation,
                                                                           x.rows, x.cols));
                    }
                    if (t.RequiresGrad(in[1])) {
                      t.AccumulateGrad(in[1],
                                       kern::Conv1dDilatedGradKernels(g, x, dilation, k.cols));
                    }
                  });
}

Tape::Var Tape::TransposedConv1d(Var activations, Var kernels, int stride, int out_len) {
  Matrix out = kern::TransposedConv1d(Value(activations), Value(kernels), stride, out_len);
  return PushNode({activations, kernels}, std::move(out),
                  [stride](Tape& t, const std::vector<Var>& in, Var out_var) {
                    const Matrix& g = t.slots_[out_var].grad;
                    const Matrix& a = t.Value(in[0]);
                    const Matrix& w = t.Value(in[1]);
                    if (t.RequiresGrad(in[0])) {
                      t.AccumulateGrad(in[0], kern::TransposedConv1dGradActivations(
                                                  g, w, stride, a.rows, a.cols));
                    }
                    if (t.RequiresGrad(in[1])) {
                      t.AccumulateGrad(in[1], kern::TransposedConv1dGradKernels(g, a, stride,
                                                                                w.cols));
                    }
                  });
}

Tape::Var Tape::Relu(Var x) {
  Matrix out = kern::Relu(Value(x));
  return PushNode({x}, std::move(out), [](Tape& t, const std::vector<Var>& in, Var out_var) {
    const Matrix& g = t.slots_[out_var].grad;
    t.AccumulateGrad(in[0], kern::ReluGrad(g, t.Value(in[0])));
  });
}

Tape::Var Tape::Add(Var a, Var b) {
  Matrix out = kern::Add(Value(a), Value(b));
  return PushNode({a, b}, std::move(out), [](Tape& t, const std::vector<Var>& in, Var out_var) {
    const Matrix& g = t.slots_[out_var].grad;
    t.AccumulateGrad(in[0], g);
    t.AccumulateGrad(in[1], g);
  });
}

Tape::Var Tape::Hadamard(Var a, Var b) {
  Matrix out = kern::Hadamard(Value(a), Value(b));
  return PushNode({a, b}, std::move(out), [](Tape& t, const std::vector<Var>& in, Var out_var) {
    const Matrix& g = t.slots_[out_var].grad;
    t.AccumulateGrad(in[0], kern::Hadamard(g, t.Value(in[1])));
    t.AccumulateGrad(in[1], kern::Hadamard(g, t.Value(in[0])));
  });
}

Tape::Var Tape::Scale(Var a, double s) {
  Matrix out = kern::Scale(Value(a), s);
  return PushNode({a}, std::move(out), [s](Tape& t, const std::vector<Var>& in, Var out_var) {
    const Matrix& g = t.slots_[out_var].grad;
    t.AccumulateGrad(in[0], kern::Scale(g, s));
  });
}

Tape::Var Tape::Custom(std::vector<Var> inputs, Matrix value, BackwardFn backward) {
  return PushNode(std::move(inputs), std::move(value), std::move(backward));
}

void Tape::Backward(Var loss) {
  if (nodes_.empty()) throw StateError("backward called before any forward operation");
  if (loss < 0 || loss >= static_cast<Var>(slots_.size())) {
    throw StateError("backward: unknown loss variable");
  }
  const Slot& ls = slots_[loss];
  if (ls.value.rows != 1 || ls.value.cols != 1) {
    throw StateError("backward: loss must be a scalar");
  }

  for (Slot& s : slots_) {
    if (s.requires_grad) s.grad = Matrix::Zeros(s.value.rows, s.value.cols);
  }
  backward_ran_ = true;
  if (!slots_[loss].requires_grad) return;  // loss independent of all parameters
  slots_[loss].grad.At(0, 0) = 1.0;

  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (!slots_[it->output].requires_grad) continue;
    it->backward(*this, it->inputs, it->output);
  }
}

}  // namespace sinedae
