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
#include "botdetect/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "botdetect/kernels.hpp"

namespace botdetect::ad {

const Matrix& Var::value() const { return tape_->value(id_); }
const Matrix& Var::grad() const { return tape_->grad_or_zero(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::constant(Matrix value) { return record("constant", std::move(value), {}, nullptr); }

Var Tape::parameter(Matrix value) {
  Var v = record("parameter", std::move(value), {}, nullptr);
  nodes_[v.id_].requires_grad = true;
  return v;
}

Var Tape::record(const char* op, Matrix value, std::initializer_list<Var> parents, BackwardFn backward) {
  return record(op, std::move(value), std::span<const Var>(parents.begin(), parents.size()), std::move(backward));
}

Var Tape::record(const char* op, Matrix value, std::span<const Var> parents, BackwardFn backward) {
  if (!value.all_finite()) throw NumericalError(std::string("non-finite value produced by ") + op);
  bool needs = false;
  for (const Var& p : parents) {
    if (p.tape_ != this) throw ShapeError(std::string(op) + ": operand recorded on another tape");
    needs = needs || nodes_[p.id_].requires_grad;
  }
  Node node;
  node.value = std::move(value);
  node.requires_grad = needs;
  if (needs) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Matrix& Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0 && n.value.size() != 0) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

const Matrix& Tape::grad_or_zero(std::size_t id) { return grad(id); }

void Tape::backward(Var root) {
  if (root.tape_ != this) throw ShapeError("backward: root belongs to another tape");
  const Matrix& rv = nodes_[root.id_].value;
  if (rv.rows() != 1 || rv.cols() != 1) throw ShapeError("backward: root must be a 1x1 scalar");
  if (!nodes_[root.id_].requires_grad) return;
  grad(root.id_)(0, 0) += 1.0;
  for (std::size_t id = root.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || !n.backward || n.grad.size() == 0) continue;
    n.backward(*this, id);
  }
}

namespace {

void add_into(Matrix& dst, const Matrix& src) {
  Scalar* d = dst.data();
  const Scalar* s = src.data();
  for (std::size_t k = 0; k < dst.size(); ++k) d[k] += s[k];
}

void require(bool ok, const char* msg) {
  if (!ok) throw ShapeError(msg);
}

}  // namespace

Var matmul(Var a, Var b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Matrix out;
  kernels::gemm_nn(a.value(), b.value(), out);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("matmul", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) kernels::gemm_nt(g, t.value(ib), t.grad(ia), true);
    if (t.requires_grad(ib)) kernels::gemm_tn(t.value(ia), g, t.grad(ib), true);
  });
}

Var matmul_nt(Var a, Var b) {
  require(a.cols() == b.cols(), "matmul_nt: inner dimensions differ");
  Matrix out;
  kernels::gemm_nt(a.value(), b.value(), out);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("matmul_nt", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    // C = A B^T: dA = G B, dB = G^T A
    if (t.requires_grad(ia)) kernels::gemm_nn(g, t.value(ib), t.grad(ia), true);
    if (t.requires_grad(ib)) kernels::gemm_tn(g, t.value(ia), t.grad(ib), true);
  });
}

Var add(Var a, Var b) {
  require(a.value().same_shape(b.value()), "add: shape mismatch");
  Matrix out = a.value();
  add_into(out, b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("add", std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) add_into(t.grad(ia), g);
    if (t.requires_grad(ib)) add_into(t.grad(ib), g);
  });
}

Var add_bias(Var x, Var bias) {
  require(bias.rows() == 1 && bias.cols() == x.cols(), "add_bias: bias must be 1 x cols");
  Matrix out = x.value();
  const auto bv = bias.value().row(0);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += bv[c];
  }
  const std::size_t ix = x.id(), ib = bias.id();
  return x.tape().record("add_bias", std::move(out), {x, bias}, [ix, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ix)) add_into(t.grad(ix), g);
    if (t.requires_grad(ib)) {
      auto gb = t.grad(ib).row(0);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        const auto row = g.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) gb[c] += row[c];
      }
    }
  });
}

Var linear(Var x, Var weight, Var bias) { return add_bias(matmul_nt(x, weight), bias); }

Var scale(Var x, Scalar factor) {
  Matrix out = x.value();
  for (auto& v : out.values()) v *= factor;
  const std::size_t ix = x.id();
  return x.tape().record("scale", std::move(out), {x}, [ix, factor](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad(ix);
    for (std::size_t k = 0; k < g.size(); ++k) gx.data()[k] += factor * g.data()[k];
  });
}

Var leaky_relu(Var x, Scalar slope) {
  Matrix out = x.value();
  for (auto& v : out.values()) v = v >= 0.0 ? v : slope * v;
  const std::size_t ix = x.id();
  return x.tape().record("leaky_relu", std::move(out), {x}, [ix, slope](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& in = t.value(ix);
    Matrix& gx = t.grad(ix);
    for (std::size_t k = 0; k < g.size(); ++k) gx.data()[k] += in.data()[k] >= 0.0 ? g.data()[k] : slope * g.data()[k];
  });
}

Var softmax_rows(Var x) {
  Matrix out = x.value();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    if (row.empty()) continue;
    const Scalar mx = *std::max_element(row.begin(), row.end());
    Scalar total = 0.0;
    for (auto& v : row) {
      v = std::exp(v - mx);
      total += v;
    }
    for (auto& v : row) v /= total;
  }
  const std::size_t ix = x.id();
  return x.tape().record("softmax_rows", std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& y = t.value(self);
    Matrix& gx = t.grad(ix);
    for (std::size_t r = 0; r < y.rows(); ++r) {
      Scalar dotp = 0.0;
      for (std::size_t c = 0; c < y.cols(); ++c) dotp += g(r, c) * y(r, c);
      for (std::size_t c = 0; c < y.cols(); ++c) gx(r, c) += y(r, c) * (g(r, c) - dotp);
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  require(!parts.empty(), "concat_cols: no parts");
  const std::size_t rows = parts.front().rows();
  std::size_t width = 0;
  for (const Var& p : parts) {
    require(p.rows() == rows, "concat_cols: row counts differ");
    width += p.cols();
  }
  Matrix out(rows, width);
  std::vector<std::size_t> ids, offsets;
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Matrix& v = p.value();
    for (std::size_t r = 0; r < rows; ++r) std::copy_n(v.row(r).data(), v.cols(), out.row(r).data() + off);
    ids.push_back(p.id());
    offsets.push_back(off);
    off += v.cols();
  }
  return parts.front().tape().record(
      "concat_cols", std::move(out), parts, [ids, offsets](Tape& t, std::size_t self) {
        const Matrix& g = t.grad(self);
        for (std::size_t p = 0; p < ids.size(); ++p) {
          if (!t.requires_grad(ids[p])) continue;
          Matrix& gp = t.grad(ids[p]);
          for (std::size_t r = 0; r < gp.rows(); ++r)
            for (std::size_t c = 0; c < gp.cols(); ++c) gp(r, c) += g(r, offsets[p] + c);
        }
      });
}

Var mean_rows(Var x) {
  Matrix out = kernels::mean_rows(x.value());
  const std::size_t ix = x.id();
  return x.tape().record("mean_rows", std::move(out), {x}, [ix](Tape& t, std::size_t self) {
    const auto g = t.grad(self).row(0);
    Matrix& gx = t.grad(ix);
    const Scalar m = static_cast<Scalar>(gx.rows());
    for (std::size_t r = 0; r < gx.rows(); ++r)
      for (std::size_t c = 0; c < gx.cols(); ++c) gx(r, c) += g[c] / m;
  });
}

Var sum(Var x) {
  Scalar s = 0.0;
  for (Scalar v : x.value().values()) s += v;
  const std::size_t ix = x.id();
  return x.tape().record("sum", Matrix(1, 1, s), {x}, [ix](Tape& t, std::size_t self) {
    const Scalar g = t.grad(self)(0, 0);
    for (auto& v : t.grad(ix).values()) v += g;
  });
}

Var sum_squares(Var x) {
  Scalar s = 0.0;
  for (Scalar v : x.value().values()) s += v * v;
  const std::size_t ix = x.id();
  return x.tape().record("sum_squares", Matrix(1, 1, s), {x}, [ix](Tape& t, std::size_t self) {
    const Scalar g = t.grad(self)(0, 0);
    const Matrix& in = t.value(ix);
    Matrix& gx = t.grad(ix);
    for (std::size_t k = 0; k < in.size(); ++k) gx.data()[k] += 2.0 * in.data()[k] * g;
  });
}

Var binary_cross_entropy(Var probs, std::span<const int> labels, std::span<const std::uint8_t> mask, Reduction reduction) {
  constexpr Scalar kFloor = 1e-12;
  const Matrix& p = probs.value();
  require(p.cols() == 2, "binary_cross_entropy: probs must have two columns");
  require(labels.size() == p.rows() && mask.size() == p.rows(), "binary_cross_entropy: label/mask length mismatch");
  std::size_t count = 0;
  Scalar total = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    if (!mask[i]) continue;
    if (labels[i] != 0 && labels[i] != 1)
      throw DataError(DataErrorKind::kMalformed, "binary_cross_entropy: masked node " + std::to_string(i) + " has no label");
    ++count;
    const Scalar bot = p(i, 1);
    total -= labels[i] == 1 ? std::log(std::max(bot, kFloor)) : std::log(std::max(1.0 - bot, kFloor));
  }
  if (count == 0) throw DataError(DataErrorKind::kEmptyMask, "binary_cross_entropy: empty mask");
  const Scalar denom = reduction == Reduction::kMean ? static_cast<Scalar>(count) : 1.0;
  std::vector<int> lab(labels.begin(), labels.end());
  std::vector<std::uint8_t> msk(mask.begin(), mask.end());
  const std::size_t ip = probs.id();
  return probs.tape().record(
      "binary_cross_entropy", Matrix(1, 1, total / denom), {probs},
      [ip, lab = std::move(lab), msk = std::move(msk), denom](Tape& t, std::size_t self) {
        const Scalar g = t.grad(self)(0, 0) / denom;
        const Matrix& pv = t.value(ip);
        Matrix& gp = t.grad(ip);
        for (std::size_t i = 0; i < pv.rows(); ++i) {
          if (!msk[i]) continue;
          const Scalar bot = pv(i, 1);
          // Clamped logs are flat, so they pass no gradient.
          if (lab[i] == 1) {
            if (bot > kFloor) gp(i, 1) -= g / bot;
          } else {
            if (1.0 - bot > kFloor) gp(i, 1) += g / (1.0 - bot);
          }
        }
      });
}

}  // namespace botdetect::ad
