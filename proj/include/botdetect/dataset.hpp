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
#ifndef BOTDETECT_DATASET_HPP
#define BOTDETECT_DATASET_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "botdetect/hetero_graph.hpp"
#include "botdetect/ingest.hpp"
#include "botdetect/matrix.hpp"

namespace botdetect {

/// Per-user input blocks, one row per node.
struct FeatureBundle {
  Matrix description;  // n x D_s
  Matrix tweets;       // n x D_s, mean over the user's tweets
  Matrix numerical;    // n x 6, z-scored
  Matrix categorical;  // n x 22, one-hot pairs

  std::size_t num_nodes() const { return numerical.rows(); }
  void validate() const;
};

/// Everything training needs: features, graph, labels and splits.
struct Dataset {
  std::vector<std::string> user_ids;
  FeatureBundle features;
  HeteroGraph graph;
  std::vector<int> labels;  // ingest::kNoLabel for unlabeled users
  ingest::SplitMasks masks;
  ingest::NumericStats numeric_stats;

  std::size_t num_nodes() const { return features.num_nodes(); }
  /// Checks shapes, graph indices, mask disjointness and mask labels.
  void validate() const;
};

// Packed bundle ("BRGB", version 1), little-endian:
//   u32 version, u32 n, u32 text_dim_desc, u32 text_dim_tweets
//   n x (u16 id length + UTF-8 id)
//   n x u8 label (0 human, 1 bot, 255 none), n x u8 split (0 train .. 3 none)
//   6 x f64 mean, 6 x f64 stddev
//   feature blocks as f64, row-major: description, tweets, numerical, categorical
//   per relation (following, follower): u64 edge count, (n + 1) x u64 offsets,
//   edge count x u32 neighbour indices
void save_bundle(const std::filesystem::path& path, const Dataset& data);
/// With `with_graph` false the adjacency section is skipped and an edgeless
/// graph is returned.
Dataset load_bundle(const std::filesystem::path& path, bool with_graph = true);

}  // namespace botdetect

#endif  // BOTDETECT_DATASET_HPP
