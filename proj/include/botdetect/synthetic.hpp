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
#ifndef BOTDETECT_SYNTHETIC_HPP
#define BOTDETECT_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "botdetect/dataset.hpp"
#include "botdetect/gradcheck.hpp"

namespace botdetect::synthetic {

/// Deterministic draws that do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool coin(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Two planted communities (bots and humans). Every user follows
/// `out_degree` distinct others, each inside its own community with
/// probability `homophily`. All node features are label-independent noise,
/// so only the follow structure reveals the label.
struct CommunityConfig {
  std::size_t per_community = 100;
  std::size_t out_degree = 10;
  double homophily = 0.9;
  std::size_t text_dim = 32;
  double train_fraction = 0.5;
  double val_fraction = 0.1;
  std::uint64_t seed = 2021;
};

Dataset make_community_dataset(const CommunityConfig& cfg);

/// Six users whose features separate bots from humans linearly in every
/// modality. Nodes 0-3 train, 4 val, 5 test; text width 4.
Dataset make_separable_fixture();

/// Small random dataset for gradient and oracle checks (text width 4).
Dataset make_random_fixture(std::size_t n_nodes, std::size_t edges_per_node, std::uint64_t seed);

struct GradCheckReport {
  std::string name;
  double max_error = 0.0;
};

/// Finite-difference checks over every differentiable op, every layer type
/// and the full objective for each variant with lambda in {0, 0.01}, on
/// 6-node double-precision fixtures.
std::vector<GradCheckReport> run_gradient_suite(std::uint64_t seed = 7);

}  // namespace botdetect::synthetic

#endif  // BOTDETECT_SYNTHETIC_HPP
