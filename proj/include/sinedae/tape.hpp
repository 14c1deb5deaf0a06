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

#ifndef SINEDAE_TAPE_HPP_
#define SINEDAE_TAPE_HPP_

#include <functional>
#include <vector>

#include "sinedae/matrix.hpp"

namespace sinedae {

// Primitive-level reverse-mode tape. Forward calls append one node per
// primitive (conv, relu, elementwise, fused loss); Backward replays the
// nodes in exact reverse order and accumulates gradients into every
// variable that requires them. Gradients are deterministic: node order is
// fixed and every kernel uses a fixed per-element reduction order.
//
// One tape owns one forward pass. Distinct tapes are independent and may
// run on distinct threads.
class Tape {
 public:
  using Var = int;

  /// Backward closure for Custom nodes: read GradOf(out), accumulate into
  /// the inputs via AccumulateGrad.
  using BackwardFn = std::function<void(Tape&, const std::vector<Var>&, Var)>;

  /// Leaf that never receives a gradient (signals, frozen envelopes).
  Var Constant(Matrix value);
  /// Leaf registered as a trainable parameter.
  Var Param(Matrix value);

  Var Conv1dStrided(Var input, Var kernels, int stride, int pad_left);
  Var Conv1dDilated(Var input, Var kernels, int dilation);
  Var TransposedConv1d(Var activations, Var kernels, int stride, int out_len);
  Var Relu(Var x);
  Var Add(Var a, Var b);
  Var Hadamard(Var a, Var b);
  Var Scale(Var a, double s);

  /// Extension point: other modules register fused primitives with their
  /// own analytic backward pass.
  Var Custom(std::vector<Var> inputs, Matrix value, BackwardFn backward);

  /// Seeds d(loss)/d(loss) = 1 and runs every node's backward in reverse
  /// forward order. loss must be a 1x1 value. Throws StateError when no
  /// forward pass has been recorded.
  void Backward(Var loss);

  const Matrix& Value(Var v) const { return slots_[v].value; }
  /// Gradient of the last Backward target w.r.t. v; valid only after
  /// Backward and only for vars that require gradients.
  const Matrix& GradOf(Var v) const;
  bool RequiresGrad(Var v) const { return slots_[v].requires_grad; }

  /// Adds delta into v's gradient buffer; no-op when v does not require
  /// gradients. Backward-closure helper.
  void AccumulateGrad(Var v, const Matrix& delta);

  std::size_t NodeCount() const { return nodes_.size(); }

 private:
  struct Slot {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
  };
  struct Node {
    std::vector<Var> inputs;
    Var output = -1;
    BackwardFn backward;
  };

  Var PushSlot(Matrix value, bool requires_grad);
  Var PushNode(std::vector<Var> inputs, Matrix value, BackwardFn backward);
  bool AnyRequires(const std::vector<Var>& vars) const;

  std::vector<Slot> slots_;
  std::vector<Node> nodes_;
  bool backward_ran_ = false;
};

}  // namespace sinedae

#endif  // SINEDAE_TAPE_HPP_
