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
#ifndef BOTDETECT_HETERO_GRAPH_HPP
#define BOTDETECT_HETERO_GRAPH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace botdetect {

/// Compressed sparse row adjacency. Row i lists the neighbours N(i) in
/// ascending order without duplicates. A transposed view (column j -> rows i
/// with j in N(i), plus the forward edge id) is kept for backward passes.
class Csr {
 public:
  Csr() = default;
  explicit Csr(std::size_t n) : n_(n), offsets_(n + 1, 0), t_offsets_(n + 1, 0) {}

  /// Builds from per-node neighbour lists; lists are sorted and deduplicated.
  static Csr from_lists(std::vector<std::vector<std::uint32_t>> lists);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return indices_.size(); }

  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t edge_begin(std::size_t i) const { return offsets_[i]; }
  std::size_t edge_end(std::size_t i) const { return offsets_[i + 1]; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {indices_.data() + offsets_[i], degree(i)};
  }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }

  // Transposed access: entries k in [t_begin(j), t_end(j)) give the source
  // row t_row(k) and forward edge id t_edge(k), ascending by source row.
  std::size_t t_begin(std::size_t j) const { return t_offsets_[j]; }
  std::size_t t_end(std::size_t j) const { return t_offsets_[j + 1]; }
  std::uint32_t t_row(std::size_t k) const { return t_rows_[k]; }
  std::size_t t_edge(std::size_t k) const { return t_edges_[k]; }

  bool contains(std::size_t i, std::uint32_t j) const;

  /// Throws DataError when offsets are not monotone or indices fall outside [0, n).
  void validate() const;

  friend bool operator==(const Csr& a, const Csr& b) {
    return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.indices_ == b.indices_;
  }

 private:
  void build_transpose();

  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<std::size_t> t_offsets_{0};
  std::vector<std::uint32_t> t_rows_;
  std::vector<std::size_t> t_edges_;
};

enum class Relation : std::uint8_t { kFollowing = 0, kFollower = 1 };
inline constexpr std::size_t kNumRelations = 2;
inline constexpr std::array<Relation, kNumRelations> kRelations{Relation::kFollowing,
                                                                 Relation::kFollower};

std::string_view relation_name(Relation r);

/// Users as nodes with one adjacency per relation: following (r1) and
/// follower (r2).
struct HeteroGraph {
  std::size_t n_nodes = 0;
  std::array<Csr, kNumRelations> relations;

  const Csr& relation(Relation r) const { return relations[static_cast<std::size_t>(r)]; }
  std::size_t num_edges() const { return relations[0].num_edges() + relations[1].num_edges(); }

  /// Graph with no edges in either relation.
  static HeteroGraph edgeless(std::size_t n);

  /// Union of both relations, symmetrised, with a self-loop on every node.
  /// This is the homogeneous graph used by the GCN and GAT variants.
  Csr homogenized() const;

  void validate() const;
};

}  // namespace botdetect

#endif  // BOTDETECT_HETERO_GRAPH_HPP
