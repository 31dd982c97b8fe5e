/*
Copyright 2026 The botdetect Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef BOTDETECT_TAPE_HPP
#define BOTDETECT_TAPE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "botdetect/matrix.hpp"

namespace botdetect::ad {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; only valid while the
/// owning tape is alive.
class Var {
 public:
  Var() = default;

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  const Matrix& value() const;
  /// Gradient after Tape::backward; zeros if nothing reached this node.
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording of a computation.
///
/// Nodes are appended in creation order, which is a topological order, and
/// backward() walks them once in reverse. Gradients accumulate, so a value
/// used twice receives the sum of both contributions.
class Tape {
 public:
  /// Backward rule: reads the node's own gradient and adds into its parents'.
  using BackwardFn = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var parameter(Matrix value);

  /// Records an op output. Throws NumericalError naming `op` when the value
  /// contains NaN or Inf.
  Var record(const char* op, Matrix value, std::initializer_list<Var> parents, BackwardFn backward);
  Var record(const char* op, Matrix value, std::span<const Var> parents, BackwardFn backward);

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Mutable gradient buffer, allocated as zeros on first use.
  Matrix& grad(std::size_t id);
  const Matrix& grad_or_zero(std::size_t id);

  /// Seeds d(root)/d(root) = 1 for a 1x1 root and propagates to every node.
  void backward(Var root);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

enum class Reduction { kSum, kMean };

// Differentiable ops. Every op checks shapes (ShapeError) and finiteness of
// its output (NumericalError).

Var matmul(Var a, Var b);                  // A B
Var matmul_nt(Var a, Var b);               // A B^T
Var add(Var a, Var b);                     // elementwise
Var add_bias(Var x, Var bias);             // x + 1 * bias, bias is 1 x cols
Var linear(Var x, Var weight, Var bias);   // x W^T + b, W is out x in
Var scale(Var x, Scalar factor);
Var leaky_relu(Var x, Scalar slope);       // derivative at 0 is 1
Var softmax_rows(Var x);
Var concat_cols(std::span<const Var> parts);
Var mean_rows(Var x);                      // 1 x cols, needs >= 1 row
Var sum(Var x);                            // 1 x 1
Var sum_squares(Var x);                    // 1 x 1

/// Binary cross-entropy on P(class 1) = probs(i, 1) over rows with mask[i]:
/// -[y log p + (1 - y) log(1 - p)], logs clamped at 1e-12. Throws DataError
/// when the mask selects nothing.
Var binary_cross_entropy(Var probs, std::span<const int> labels, std::span<const std::uint8_t> mask,
                         Reduction reduction);

}  // namespace botdetect::ad

#endif  // BOTDETECT_TAPE_HPP
