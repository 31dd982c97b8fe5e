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
#include "botdetect/layers.hpp"

#include <memory>

#include "botdetect/kernels.hpp"

namespace botdetect::gnn {

std::string_view variant_name(GnnVariant v) {
  switch (v) {
    case GnnVariant::kRgcn: return "rgcn";
    case GnnVariant::kGcn: return "gcn";
    case GnnVariant::kGat: return "gat";
    case GnnVariant::kMlp: return "mlp";
  }
  return "unknown";
}

std::optional<GnnVariant> parse_variant(std::string_view name) {
  for (auto v : {GnnVariant::kRgcn, GnnVariant::kGcn, GnnVariant::kGat, GnnVariant::kMlp})
    if (variant_name(v) == name) return v;
  return std::nullopt;
}

HomogeneousGraph HomogeneousGraph::from(const HeteroGraph& g) {
  HomogeneousGraph h;
  h.adjacency = g.homogenized();
  h.gcn_weights = kernels::gcn_edge_weights(h.adjacency);
  return h;
}

// Backward closures outlive the call, so graph data they need is held by
// pointer; callers keep graphs alive for the lifetime of the tape.

ad::Var relational_mean_aggregate(ad::Var h, const Csr& relation) {
  Matrix out;
  kernels::csr_mean(relation, h.value(), out);
  const std::size_t ih = h.id();
  const Csr* g = &relation;
  return h.tape().record("relational_mean_aggregate", std::move(out), {h},
                         [ih, g](ad::Tape& t, std::size_t self) {
                           kernels::csr_mean_backward(*g, t.grad(self), t.grad(ih));
                         });
}

ad::Var rgcn_layer(ad::Var h, const HeteroGraph& g, const RgcnLayerParams& p) {
  const std::size_t d = h.cols();
  for (const ad::Var& m : {p.theta_self, p.theta_rel[0], p.theta_rel[1]}) {
    if (m.rows() != d || m.cols() != d) throw ShapeError("rgcn_layer: projection matrices must be D x D");
  }
  ad::Var out = ad::matmul_nt(h, p.theta_self);
  for (Relation r : kRelations) {
    const ad::Var agg = relational_mean_aggregate(h, g.relation(r));
    out = ad::add(out, ad::matmul_nt(agg, p.theta_rel[static_cast<std::size_t>(r)]));
  }
  return out;
}

ad::Var gcn_propagate(ad::Var h, const HomogeneousGraph& g) {
  Matrix out;
  kernels::csr_weighted_sum(g.adjacency, g.gcn_weights, h.value(), out);
  const std::size_t ih = h.id();
  const HomogeneousGraph* gp = &g;
  return h.tape().record("gcn_propagate", std::move(out), {h}, [ih, gp](ad::Tape& t, std::size_t self) {
    kernels::csr_weighted_sum_backward(gp->adjacency, gp->gcn_weights, t.grad(self), t.grad(ih));
  });
}

ad::Var gcn_layer(ad::Var h, const HomogeneousGraph& g, ad::Var weight) {
  return ad::matmul_nt(gcn_propagate(h, g), weight);
}

ad::Var gat_attend(ad::Var z, ad::Var attn, const Csr& adjacency, Scalar slope) {
  if (attn.rows() != 1 || attn.cols() != 2 * z.cols()) throw ShapeError("gat_attend: attention must be 1 x 2D");
  Matrix out;
  auto cache = std::make_shared<kernels::GatCache>();
  kernels::gat_forward(adjacency, z.value(), attn.value().row(0), slope, out, *cache);
  const std::size_t iz = z.id(), ia = attn.id();
  const Csr* g = &adjacency;
  return z.tape().record("gat_attend", std::move(out), {z, attn},
                         [iz, ia, g, slope, cache](ad::Tape& t, std::size_t self) {
                           Matrix dz(t.value(iz).rows(), t.value(iz).cols());
                           Matrix dattn(1, t.value(ia).cols());
                           kernels::gat_backward(*g, t.value(iz), t.value(ia).row(0), slope, *cache, t.grad(self),
                                                 dz, dattn.row(0));
                           if (t.requires_grad(iz)) {
                             Matrix& gz = t.grad(iz);
                             for (std::size_t k = 0; k < dz.size(); ++k) gz.data()[k] += dz.data()[k];
                           }
                           if (t.requires_grad(ia)) {
                             Matrix& ga = t.grad(ia);
                             for (std::size_t k = 0; k < dattn.size(); ++k) ga.data()[k] += dattn.data()[k];
                           }
                         });
}

ad::Var gat_layer(ad::Var h, const HomogeneousGraph& g, ad::Var weight, ad::Var attn, Scalar slope) {
  return gat_attend(ad::matmul_nt(h, weight), attn, g.adjacency, slope);
}

ad::Var mlp_layer(ad::Var h, ad::Var weight, ad::Var bias) { return ad::linear(h, weight, bias); }

}  // namespace botdetect::gnn
