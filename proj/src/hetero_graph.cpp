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
#include "botdetect/hetero_graph.hpp"

#include <algorithm>
#include <string>

#include "botdetect/error.hpp"

namespace botdetect {

Csr Csr::from_lists(std::vector<std::vector<std::uint32_t>> lists) {
  Csr g(lists.size());
  std::size_t total = 0;
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    total += l.size();
  }
  g.indices_.reserve(total);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    g.indices_.insert(g.indices_.end(), lists[i].begin(), lists[i].end());
    g.offsets_[i + 1] = g.indices_.size();
  }
  g.validate();
  g.build_transpose();
  return g;
}

void Csr::build_transpose() {
  t_offsets_.assign(n_ + 1, 0);
  for (auto j : indices_) ++t_offsets_[j + 1];
  for (std::size_t j = 0; j < n_; ++j) t_offsets_[j + 1] += t_offsets_[j];
  t_rows_.resize(indices_.size());
  t_edges_.resize(indices_.size());
  std::vector<std::size_t> cursor(t_offsets_.begin(), t_offsets_.end() - 1);
  // Rows are visited in ascending order, so each column's entries come out sorted.
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
      const std::size_t k = cursor[indices_[e]]++;
      t_rows_[k] = static_cast<std::uint32_t>(i);
      t_edges_[k] = e;
    }
  }
}

bool Csr::contains(std::size_t i, std::uint32_t j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

void Csr::validate() const {
  if (offsets_.size() != n_ + 1 || offsets_.front() != 0 || offsets_.back() != indices_.size())
    throw DataError(DataErrorKind::kMalformed, "csr: offsets inconsistent with edge count");
  for (std::size_t i = 0; i < n_; ++i) {
    if (offsets_[i + 1] < offsets_[i])
      throw DataError(DataErrorKind::kMalformed, "csr: offsets not monotone at row " + std::to_string(i));
  }
  for (auto j : indices_) {
    if (j >= n_)
      throw DataError(DataErrorKind::kMalformed, "csr: neighbour index " + std::to_string(j) + " out of range");
  }
}

std::string_view relation_name(Relation r) {
  return r == Relation::kFollowing ? "following" : "follower";
}

HeteroGraph HeteroGraph::edgeless(std::size_t n) {
  HeteroGraph g;
  g.n_nodes = n;
  for (auto& rel : g.relations) rel = Csr::from_lists(std::vector<std::vector<std::uint32_t>>(n));
  return g;
}

Csr HeteroGraph::homogenized() const {
  std::vector<std::vector<std::uint32_t>> lists(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) lists[i].push_back(static_cast<std::uint32_t>(i));
  for (const auto& rel : relations) {
    for (std::size_t i = 0; i < n_nodes; ++i) {
      for (auto j : rel.neighbors(i)) {
        lists[i].push_back(j);
        lists[j].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  return Csr::from_lists(std::move(lists));
}

void HeteroGraph::validate() const {
  for (const auto& rel : relations) {
    if (rel.num_nodes() != n_nodes)
      throw DataError(DataErrorKind::kShapeMismatch, "graph: relation node count differs from graph");
    rel.validate();
  }
}

}  // namespace botdetect
