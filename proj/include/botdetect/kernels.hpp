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
#ifndef BOTDETECT_KERNELS_HPP
#define BOTDETECT_KERNELS_HPP

#include <span>
#include <vector>

#include "botdetect/hetero_graph.hpp"
#include "botdetect/matrix.hpp"

// Dense and sparse compute kernels.
//
// The functions in botdetect::kernels are OpenMP-parallel over output rows.
// botdetect::kernels::ref holds straightforward serial versions that are kept
// for testing and benchmarking. Every output element is reduced in the same
// order by both, so results agree bit for bit regardless of thread count.
//
// `accumulate` adds the result onto the existing contents of the output
// instead of overwriting it; outputs must already have the right shape in
// that case.

namespace botdetect::kernels {

/// C (+)= A * B
void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
/// C (+)= A * B^T
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
/// C (+)= A^T * B
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);

/// out_i = mean over j in N(i) of x_j; zero row when N(i) is empty.
/// Neighbour sums are correctly rounded, hence independent of node labelling.
void csr_mean(const Csr& g, const Matrix& x, Matrix& out);
/// dx_j += sum over {i : j in N(i)} of dout_i / |N(i)|
void csr_mean_backward(const Csr& g, const Matrix& dout, Matrix& dx);

/// out_i = sum over edges e = (i, j) of w_e * x_j
void csr_weighted_sum(const Csr& g, std::span<const Scalar> w, const Matrix& x, Matrix& out);
/// dx_j += sum over edges e = (i, j) of w_e * dout_i
void csr_weighted_sum_backward(const Csr& g, std::span<const Scalar> w, const Matrix& dout, Matrix& dx);

/// Per-edge symmetric GCN weights 1 / sqrt(deg(i) * deg(j)) for a graph that
/// already contains self-loops.
std::vector<Scalar> gcn_edge_weights(const Csr& g);

struct GatCache {
  std::vector<Scalar> preact;  // per edge, before leaky-relu
  std::vector<Scalar> alpha;   // per edge, attention weight
};

/// Single-head graph attention over z (already projected by W).
/// attn holds [a_dst ; a_src] of length 2 * z.cols(); the logit for edge
/// (i, j) is leaky_relu(a_dst . z_i + a_src . z_j, slope), normalised by a
/// softmax over N(i). out_i = sum_j alpha_ij z_j.
void gat_forward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                 Matrix& out, GatCache& cache);
/// Accumulates gradients into dz and dattn.
void gat_backward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                  const GatCache& cache, const Matrix& dout, Matrix& dz, std::span<Scalar> dattn);

Matrix mean_rows(const Matrix& x);

namespace ref {

void gemm_nn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
void gemm_nt(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
void gemm_tn(const Matrix& a, const Matrix& b, Matrix& c, bool accumulate = false);
void csr_mean(const Csr& g, const Matrix& x, Matrix& out);
void csr_mean_backward(const Csr& g, const Matrix& dout, Matrix& dx);
void csr_weighted_sum(const Csr& g, std::span<const Scalar> w, const Matrix& x, Matrix& out);
void csr_weighted_sum_backward(const Csr& g, std::span<const Scalar> w, const Matrix& dout, Matrix& dx);
void gat_forward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                 Matrix& out, GatCache& cache);
void gat_backward(const Csr& g, const Matrix& z, std::span<const Scalar> attn, Scalar slope,
                  const GatCache& cache, const Matrix& dout, Matrix& dz, std::span<Scalar> dattn);

}  // namespace ref

}  // namespace botdetect::kernels

#endif  // BOTDETECT_KERNELS_HPP
