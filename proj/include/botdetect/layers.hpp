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
#ifndef BOTDETECT_LAYERS_HPP
#define BOTDETECT_LAYERS_HPP

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "botdetect/hetero_graph.hpp"
#include "botdetect/tape.hpp"

namespace botdetect::gnn {

enum class GnnVariant { kRgcn, kGcn, kGat, kMlp };

std::string_view variant_name(GnnVariant v);
std::optional<GnnVariant> parse_variant(std::string_view name);

/// Attention logit slope used by the GAT variant.
inline constexpr Scalar kGatSlope = 0.2;

/// Both relations merged, symmetrised and self-looped, with the symmetric
/// GCN normalisation precomputed per edge.
struct HomogeneousGraph {
  Csr adjacency;
  std::vector<Scalar> gcn_weights;

  static HomogeneousGraph from(const HeteroGraph& g);
};

struct RgcnLayerParams {
  ad::Var theta_self;                             // D x D
  std::array<ad::Var, kNumRelations> theta_rel;   // D x D each, following then follower
};

/// Row i is the mean of h over N_r(i); rows with no neighbours are zero.
ad::Var relational_mean_aggregate(ad::Var h, const Csr& relation);

/// h Theta_self^T + sum_r mean_r(h) Theta_r^T. No bias, no activation.
ad::Var rgcn_layer(ad::Var h, const HeteroGraph& g, const RgcnLayerParams& p);

/// A_hat h W^T with A_hat = D^-1/2 (A + I) D^-1/2.
ad::Var gcn_layer(ad::Var h, const HomogeneousGraph& g, ad::Var weight);

/// Single-head attention. attn is 1 x 2D laid out as [a_dst, a_src].
ad::Var gat_layer(ad::Var h, const HomogeneousGraph& g, ad::Var weight, ad::Var attn,
                  Scalar slope = kGatSlope);

/// h W^T + b; the graph is not consulted.
ad::Var mlp_layer(ad::Var h, ad::Var weight, ad::Var bias);

// Sparse building blocks, exposed for tests.
ad::Var gcn_propagate(ad::Var h, const HomogeneousGraph& g);
ad::Var gat_attend(ad::Var z, ad::Var attn, const Csr& adjacency, Scalar slope);

}  // namespace botdetect::gnn

#endif  // BOTDETECT_LAYERS_HPP
