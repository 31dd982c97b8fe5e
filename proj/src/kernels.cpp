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
#include "botdetect/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "botdetect/exact_sum.hpp"

namespace botdetect::kernels {
namespace {

// Below this many rows the fork/join cost dominates.
constexpr long kMinParallelRows = 64;

template <bool Parallel, class Body>
void for_rows(std::size_t n, Body&& body) {
  const long count = static_cast<long>(n);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static) if (count >= kMinParallelRows)
    for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  }
}

void prepare_output(Matrix& c, std::size_t rows, std::size_t cols, bool accumulate) {
  if (accumulate) {
    if (c.rows() != rows || c.cols() != cols) throw ShapeError("gemm: accumulate target has wrong shape");
  } else {
    c = Matrix(rows, cols);
  }
}

void require_rows(const Csr& g, const Matrix& x, const char* what) {
  if (x.rows() != g.num_nodes()) throw ShapeError(std::string(what) + ": row count differs from graph size");
}

template <bool Parallel>
void csr_mean_impl(const Csr& g, const Matrix& x, Matrix& out) {
  require_rows(g, x, "csr_mean");
  out = Matrix(x.rows(), x.cols());
  const std::size_t d = x.cols();
  for_rows<Parallel>(g.num_nodes(), [&](std::size_t i) {
    const auto nb = g.neighbors(i);
    if (nb.empty()) return;
    const Scalar count = static_cast<Scalar>(nb.size());
    auto orow = out.row(i);
    ExactSum acc;
    for (std::size_t c = 0; c < d; ++c) {
      acc.reset();
      for (auto j : nb) acc.add(x(j, c));
      orow[c] = acc.value() / count;
    }
  });
}

template <bool Parallel>
void csr_mean_backward_impl(const Csr& g, const Matrix& dout, Matrix& dx) {
  require_rows(g, dout, "csr_mean_backward");
  if (!dx.same_shape(dout)) throw ShapeError("csr_mean_backward: gradient shape mismatch");
  const std::size_t d = dout.cols();
  for_rows<Parallel>(g.num_nodes(), [&](std::size_t j) {
    auto drow = dx.row(j);
    for (std::size_t k = g.t_begin(j); k < g.t_end(j); ++k) {
      const std::size_t i = g.t_row(k);
      const Scalar deg = static_cast<Scalar>(g.degree(i));
      const auto src = dout.row(i);
      for (std::size_t c = 0; c < d; ++c) drow[c] += src[c] / deg;
    }
  });
}

template <bool Parallel>
void csr_weighted_sum_impl(const Csr& g, std::span<const Scalar> w, const Matrix& x, Matrix& out) {
  require_rows(g, x, "csr_weighted_sum");
  if (w.size() != g.num_edges()) throw ShapeError("csr_weighted_sum: one weight per edge required");
  out = Matrix(x.rows(), x.cols());
  const std::size_t d = x.cols();
  for_rows<Parallel>(g.num_nodes(), [&](std::size_t i) {
    auto orow = out.row(i);
    ExactSum acc;
    for (std::size_t c = 0; c < d; ++c) {
      acc.reset();
      for (std::size_t e = g.edge_begin(i); e < g.edge_end(i); ++e) acc.add(w[e] * x(g.indices()[e], c));
      orow[c] = acc.value();
    }
  });
}

template <bool Parallel>
void csr_weighted_sum_backward_impl(const Csr& g, std::span<const Scalar> w, const Matrix& dout, Matrix& dx) {
  require_rows(g, dout, "csr_weighted_sum_backward");
  if (!dx.same_shape(dout)) throw ShapeError("csr_weighted_sum_backward: gradient shape mismatch");
  const std::size_t d = dout.cols();
  for_rows<Parallel>(g.num_nodes(), [&](std::size_t j) {
    auto drow = dx.row(j);
    for (std::size_t k = g.t_begin(j); k < g.t_end(j); ++k) {
      const Scalar we = w[g.t_edge(k)];
      const auto src = dout.row(g.t_row(k));
      for (std::size_t c = 0; c < d; ++c) drow[c] += we * src[c];
    }
  });
}

Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  Scalar s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

void check_gat_shapes(const Csr& g, const Matrix& z, std::span<const Scalar> attn) {
  require_rows(g, z, "gat");
  if (attn.size() != 2 * z.cols()) throw ShapeError("gat: attention vector must have length 2D");
}

template <bool Parallel>
void gat_forward_impl(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope, Matrix& out,
                      GatCache& cache) {
  check_gat_shapes(g, z, attn);
  const std::size_t n = g.num_nodes();
  const std::size_t d = z.cols();
  const auto a_dst = attn.subspan(0, d);
  const auto a_src = attn.subspan(d, d);
  std::vector<Scalar> s_dst(n), s_src(n);
  for_rows<Parallel>(n, [&](std::size_t i) {
    s_dst[i] = dot(a_dst, z.row(i));
    s_src[i] = dot(a_src, z.row(i));
  });
  cache.preact.assign(g.num_edges(), 0.0);
  cache.alpha.assign(g.num_edges(), 0.0);
  out = Matrix(n, d);
  for_rows<Parallel>(n, [&](std::size_t i) {
    const std::size_t b = g.edge_begin(i), e_end = g.edge_end(i);
    if (b == e_end) return;
    Scalar mx = -std::numeric_limits<Scalar>::infinity();
    for (std::size_t e = b; e < e_end; ++e) {
      const Scalar p = s_dst[i] + s_src[g.indices()[e]];
      const Scalar v = p >= 0.0 ? p : slope * p;
      cache.preact[e] = p;
      cache.alpha[e] = v;
      mx = std::max(mx, v);
    }
    ExactSum denom;
    for (std::size_t e = b; e < e_end; ++e) {
      cache.alpha[e] = std::exp(cache.alpha[e] - mx);
      denom.add(cache.alpha[e]);
    }
    const Scalar total = denom.value();
    for (std::size_t e = b; e < e_end; ++e) cache.alpha[e] /= total;
    auto orow = out.row(i);
    ExactSum acc;
    for (std::size_t c = 0; c < d; ++c) {
      acc.reset();
      for (std::size_t e = b; e < e_end; ++e) acc.add(cache.alpha[e] * z(g.indices()[e], c));
      orow[c] = acc.value();
    }
  });
}

template <bool Parallel>
void gat_backward_impl(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                       const GatCache& cache, const Matrix& dout, Matrix& dz, std::span<Scalar> dattn) {
  check_gat_shapes(g, z, attn);
  if (!dz.same_shape(z) || !dout.same_shape(z) || dattn.size() != attn.size())
    throw ShapeError("gat_backward: gradient shape mismatch");
  const std::size_t n = g.num_nodes();
  const std::size_t d = z.cols();
  const auto a_dst = attn.subspan(0, d);
  const auto a_src = attn.subspan(d, d);

  // Per destination row: gradient w.r.t. the pre-activation logits.
  std::vector<Scalar> dpre(g.num_edges(), 0.0);
  std::vector<Scalar> ds_dst(n, 0.0), ds_src(n, 0.0);
  for_rows<Parallel>(n, [&](std::size_t i) {
    const std::size_t b = g.edge_begin(i), e_end = g.edge_end(i);
    const auto go = dout.row(i);
    Scalar weighted = 0.0;
    for (std::size_t e = b; e < e_end; ++e) {
      dpre[e] = dot(go, z.row(g.indices()[e]));  // d loss / d alpha_e
      weighted += cache.alpha[e] * dpre[e];
    }
    Scalar sum = 0.0;
    for (std::size_t e = b; e < e_end; ++e) {
      const Scalar dlogit = cache.alpha[e] * (dpre[e] - weighted);
      dpre[e] = dlogit * (cache.preact[e] >= 0.0 ? 1.0 : slope);
      sum += dpre[e];
    }
    ds_dst[i] = sum;
  });

  // Per source column: message and source-score gradients via the transpose.
  for_rows<Parallel>(n, [&](std::size_t j) {
    auto grow = dz.row(j);
    Scalar sum = 0.0;
    for (std::size_t k = g.t_begin(j); k < g.t_end(j); ++k) {
      const std::size_t e = g.t_edge(k);
      const Scalar a = cache.alpha[e];
      const auto go = dout.row(g.t_row(k));
      for (std::size_t c = 0; c < d; ++c) grow[c] += a * go[c];
      sum += dpre[e];
    }
    ds_src[j] = sum;
    for (std::size_t c = 0; c < d; ++c) grow[c] += ds_dst[j] * a_dst[c] + ds_src[j] * a_src[c];
  });

  for_rows<Parallel>(d, [&](std::size_t c) {
    Scalar gd = 0.0, gs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gd += ds_dst[i] * z(i, c);
      gs += ds_src[i] * z(i, c);
    }
    dattn[c] += gd;
    dattn[d + c] += gs;
  });
}

}  // namespace

void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  if (a.cols() != b.rows()) throw ShapeError("gemm_nn: inner dimensions differ");
  prepare_output(c, a.rows(), b.cols(), accumulate);
  const std::size_t k_dim = a.cols(), n = b.cols();
  for_rows<true>(a.rows(), [&](std::size_t i) {
    Scalar* crow = c.row(i).data();
    for (std::size_t k = 0; k < k_dim; ++k) {
      const Scalar aik = a(i, k);
      const Scalar* brow = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  });
}

void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  if (a.cols() != b.cols()) throw ShapeError("gemm_nt: inner dimensions differ");
  prepare_output(c, a.rows(), b.rows(), accumulate);
  const std::size_t k_dim = a.cols(), n = b.rows();
  for_rows<true>(a.rows(), [&](std::size_t i) {
    const Scalar* arow = a.row(i).data();
    Scalar* crow = c.row(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar* brow = b.row(j).data();
      Scalar acc = crow[j];
      for (std::size_t k = 0; k < k_dim; ++k) acc += arow[k] * brow[k];
      crow[j] = acc;
    }
  });
}

void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  if (a.rows() != b.rows()) throw ShapeError("gemm_tn: inner dimensions differ");
  prepare_output(c, a.cols(), b.cols(), accumulate);
  const std::size_t k_dim = a.rows(), n = b.cols();
  for_rows<true>(a.cols(), [&](std::size_t i) {
    Scalar* crow = c.row(i).data();
    for (std::size_t k = 0; k < k_dim; ++k) {
      const Scalar aki = a(k, i);
      const Scalar* brow = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) crow[j] += aki * brow[j];
    }
  });
}

void csr_mean(const Csr& g, const Matrix& x, Matrix& out) { csr_mean_impl<true>(g, x, out); }
void csr_mean_backward(const Csr& g, const Matrix& dout, Matrix& dx) { csr_mean_backward_impl<true>(g, dout, dx); }
void csr_weighted_sum(const Csr& g, std::span<const Scalar> w, const Matrix& x, Matrix& out) {
  csr_weighted_sum_impl<true>(g, w, x, out);
}
void csr_weighted_sum_backward(const Csr& g, std::span<const Scalar> w, const Matrix& dout, Matrix& dx) {
  csr_weighted_sum_backward_impl<true>(g, w, dout, dx);
}
void gat_forward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope, Matrix& out,
                 GatCache& cache) {
  gat_forward_impl<true>(g, z, attn, slope, out, cache);
}
void gat_backward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                  const GatCache& cache, const Matrix& dout, Matrix& dz, std::span<Scalar> dattn) {
  gat_backward_impl<true>(g, z, attn, slope, cache, dout, dz, dattn);
}

std::vector<Scalar> gcn_edge_weights(const Csr& g) {
  std::vector<Scalar> w(g.num_edges());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (std::size_t e = g.edge_begin(i); e < g.edge_end(i); ++e) {
      const std::size_t j = g.indices()[e];
      // Integer product first so w_ij == w_ji bit for bit.
      w[e] = 1.0 / std::sqrt(static_cast<Scalar>(g.degree(i)) * static_cast<Scalar>(g.degree(j)));
    }
  }
  return w;
}

Matrix mean_rows(const Matrix& x) {
  if (x.rows() == 0) throw ShapeError("mean_rows: no rows to average");
  Matrix out(1, x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(0, c) += x(r, c);
  for (std::size_t c = 0; c < x.cols(); ++c) out(0, c) /= static_cast<Scalar>(x.rows());
  return out;
}

namespace ref {

void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  if (a.cols() != b.rows()) throw ShapeError("gemm_nn: inner dimensions differ");
  prepare_output(c, a.rows(), b.cols(), accumulate);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar acc = c(i, j);
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
}

void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  if (a.cols() != b.cols()) throw ShapeError("gemm_nt: inner dimensions differ");
  prepare_output(c, a.rows(), b.rows(), accumulate);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      Scalar acc = c(i, j);
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
      c(i, j) = acc;
    }
}

void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate) {
  if (a.rows() != b.rows()) throw ShapeError("gemm_tn: inner dimensions differ");
  prepare_output(c, a.cols(), b.cols(), accumulate);
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar acc = c(i, j);
      for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
      c(i, j) = acc;
    }
}

void csr_mean(const Csr& g, const Matrix& x, Matrix& out) { csr_mean_impl<false>(g, x, out); }
void csr_mean_backward(const Csr& g, const Matrix& dout, Matrix& dx) { csr_mean_backward_impl<false>(g, dout, dx); }
void csr_weighted_sum(const Csr& g, std::span<const Scalar> w, const Matrix& x, Matrix& out) {
  csr_weighted_sum_impl<false>(g, w, x, out);
}
void csr_weighted_sum_backward(const Csr& g, std::span<const Scalar> w, const Matrix& dout, Matrix& dx) {
  csr_weighted_sum_backward_impl<false>(g, w, dout, dx);
}
void gat_forward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope, Matrix& out,
                 GatCache& cache) {
  gat_forward_impl<false>(g, z, attn, slope, out, cache);
}
void gat_backward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                  const GatCache& cache, const Matrix& dout, Matrix& dz, std::span<Scalar> dattn) {
  gat_backward_impl<false>(g, z, attn, slope, cache, dout, dz, dattn);
}

}  // namespace ref

}  // namespace botdetect::kernels
