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
#include "botdetect/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "botdetect/layers.hpp"
#include "botdetect/model.hpp"

namespace botdetect::synthetic {
namespace {

Matrix noise(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = rng.normal();
  return m;
}

Matrix random_onehot(Rng& rng, std::size_t rows) {
  Matrix m(rows, ingest::kCategoricalWidth);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < ingest::kNumCategorical; ++k) m(i, 2 * k + (rng.coin(0.5) ? 0 : 1)) = 1.0;
  return m;
}

// u follows v: v joins u's followings, u joins v's followers.
HeteroGraph graph_from_follows(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& follows) {
  std::array<std::vector<std::vector<std::uint32_t>>, kNumRelations> lists;
  for (auto& l : lists) l.resize(n);
  for (auto [u, v] : follows) {
    lists[0][u].push_back(v);
    lists[1][v].push_back(u);
  }
  HeteroGraph g;
  g.n_nodes = n;
  for (std::size_t r = 0; r < kNumRelations; ++r) g.relations[r] = Csr::from_lists(std::move(lists[r]));
  return g;
}

void fill_ids(Dataset& d) {
  d.user_ids.clear();
  for (std::size_t i = 0; i < d.labels.size(); ++i) d.user_ids.push_back("u" + std::to_string(i));
  d.numeric_stats.mean.fill(0.0);
  d.numeric_stats.stddev.fill(1.0);
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = scale * rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Dataset make_community_dataset(const CommunityConfig& cfg) {
  Rng rng(cfg.seed);
  const std::size_t per = cfg.per_community, n = 2 * per;
  if (per < 2 || cfg.out_degree >= per) throw std::invalid_argument("community too small for the requested degree");
  Dataset d;
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.labels[i] = i < per ? ingest::kBot : ingest::kHuman;

  std::vector<std::pair<std::uint32_t, std::uint32_t>> follows;
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t own = u < per ? 0 : per, other = u < per ? per : 0;
    std::set<std::size_t> targets;
    while (targets.size() < cfg.out_degree) {
      const std::size_t v = rng.coin(cfg.homophily) ? own + rng.below(per) : other + rng.below(per);
      if (v != u) targets.insert(v);
    }
    for (auto v : targets) follows.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
  }
  d.graph = graph_from_follows(n, follows);

  d.features.description = noise(rng, n, cfg.text_dim);
  d.features.tweets = noise(rng, n, cfg.text_dim);
  d.features.numerical = noise(rng, n, ingest::kNumNumerical);
  d.features.categorical = random_onehot(rng, n);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(cfg.val_fraction * static_cast<double>(n)));
  d.masks.train.assign(n, 0);
  d.masks.val.assign(n, 0);
  d.masks.test.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    auto& m = k < n_train ? d.masks.train : (k < n_train + n_val ? d.masks.val : d.masks.test);
    m[order[k]] = 1;
  }
  fill_ids(d);
  d.validate();
  return d;
}

Dataset make_separable_fixture() {
  constexpr std::size_t n = 6, text = 4;
  Dataset d;
  d.labels = {1, 0, 1, 0, 1, 0};
  d.features.description = Matrix(n, text);
  d.features.tweets = Matrix(n, text);
  d.features.numerical = Matrix(n, ingest::kNumNumerical);
  d.features.categorical = Matrix(n, ingest::kCategoricalWidth);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = d.labels[i] == 1 ? 1.0 : -1.0;
    const double wiggle = 0.1 * static_cast<double>(i);
    for (std::size_t c = 0; c < text; ++c) {
      d.features.description(i, c) = s * (1.0 + 0.25 * static_cast<double>(c)) + 0.05 * wiggle;
      d.features.tweets(i, c) = s * (0.5 + 0.1 * static_cast<double>(c)) - 0.05 * wiggle;
    }
    for (std::size_t c = 0; c < ingest::kNumNumerical; ++c) d.features.numerical(i, c) = s * 0.8 + 0.1 * wiggle;
    for (std::size_t k = 0; k < ingest::kNumCategorical; ++k) {
      const bool flag = (k % 2 == 0) == (d.labels[i] == 1);
      d.features.categorical(i, 2 * k + (flag ? 0 : 1)) = 1.0;
    }
  }
  d.graph = graph_from_follows(n, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 2}, {3, 1}});
  d.masks.train = {1, 1, 1, 1, 0, 0};
  d.masks.val = {0, 0, 0, 0, 1, 0};
  d.masks.test = {0, 0, 0, 0, 0, 1};
  fill_ids(d);
  d.validate();
  return d;
}

Dataset make_random_fixture(std::size_t n_nodes, std::size_t edges_per_node, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.labels.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) d.labels[i] = static_cast<int>(i % 2);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> follows;
  for (std::size_t u = 0; u < n_nodes; ++u)
    for (std::size_t k = 0; k < edges_per_node; ++k) {
      const std::size_t v = rng.below(n_nodes);
      if (v != u) follows.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    }
  d.graph = graph_from_follows(n_nodes, follows);
  d.features.description = noise(rng, n_nodes, 4);
  d.features.tweets = noise(rng, n_nodes, 4);
  d.features.numerical = noise(rng, n_nodes, ingest::kNumNumerical);
  d.features.categorical = random_onehot(rng, n_nodes);
  d.masks.train.assign(n_nodes, 0);
  d.masks.val.assign(n_nodes, 0);
  d.masks.test.assign(n_nodes, 0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (2 * i < n_nodes) d.masks.train[i] = 1;
    else if (i % 2 == 0) d.masks.val[i] = 1;
    else d.masks.test[i] = 1;
  }
  fill_ids(d);
  d.validate();
  return d;
}

std::vector<GradCheckReport> run_gradient_suite(std::uint64_t seed) {
  using ad::Tape;
  using ad::Var;
  Rng rng(seed);
  std::vector<GradCheckReport> out;
  auto check = [&](std::string name, const ad::ScalarFn& f, std::vector<Matrix> params) {
    out.push_back({std::move(name), ad::grad_check(f, params)});
  };

  const Dataset fx = make_random_fixture(6, 2, seed);
  const HeteroGraph& g = fx.graph;
  const auto homog = gnn::HomogeneousGraph::from(g);
  constexpr std::size_t d = 3;
  const Matrix h = random_matrix(rng, 6, d);

  check("matmul", [](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::matmul(p[0], p[1])); },
        {random_matrix(rng, 3, 4), random_matrix(rng, 4, 2)});
  check("matmul_nt", [](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::matmul_nt(p[0], p[1])); },
        {random_matrix(rng, 3, 4), random_matrix(rng, 2, 4)});
  check("linear", [](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::linear(p[0], p[1], p[2])); },
        {random_matrix(rng, 5, 3), random_matrix(rng, 2, 3), random_matrix(rng, 1, 2)});
  check("leaky_relu",
        [](Tape&, std::span<const Var> p) { return ad::sum(ad::leaky_relu(ad::matmul(p[0], p[1]), 0.01)); },
        {random_matrix(rng, 3, 3), random_matrix(rng, 3, 1)});
  check("softmax_rows", [](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::softmax_rows(p[0])); },
        {random_matrix(rng, 4, 3, 2.0)});
  check("concat_cols",
        [](Tape&, std::span<const Var> p) {
          const std::vector<Var> parts{p[0], p[1]};
          return ad::sum_squares(ad::matmul(ad::concat_cols(parts), p[2]));
        },
        {random_matrix(rng, 3, 2), random_matrix(rng, 3, 1), random_matrix(rng, 3, 2)});
  check("mean_rows", [](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::mean_rows(p[0])); },
        {random_matrix(rng, 4, 3)});
  {
    const std::vector<int> labels{1, 0, 1, 0, 1, 0};
    const ingest::Mask mask{1, 1, 1, 0, 1, 1};
    check("binary_cross_entropy",
          [&](Tape&, std::span<const Var> p) {
            return ad::binary_cross_entropy(ad::softmax_rows(p[0]), labels, mask, ad::Reduction::kMean);
          },
          {random_matrix(rng, 6, 2, 2.0)});
  }

  check("relational_mean_aggregate",
        [&](Tape&, std::span<const Var> p) {
          return ad::sum_squares(ad::add(gnn::relational_mean_aggregate(p[0], g.relation(Relation::kFollowing)),
                                         gnn::relational_mean_aggregate(p[0], g.relation(Relation::kFollower))));
        },
        {h});
  check("rgcn_layer",
        [&](Tape&, std::span<const Var> p) {
          return ad::sum_squares(gnn::rgcn_layer(p[0], g, {p[1], {p[2], p[3]}}));
        },
        {h, random_matrix(rng, d, d), random_matrix(rng, d, d), random_matrix(rng, d, d)});
  check("gcn_layer",
        [&](Tape&, std::span<const Var> p) { return ad::sum_squares(gnn::gcn_layer(p[0], homog, p[1])); },
        {h, random_matrix(rng, d, d)});
  check("gat_layer",
        [&](Tape&, std::span<const Var> p) { return ad::sum_squares(gnn::gat_layer(p[0], homog, p[1], p[2])); },
        {h, random_matrix(rng, d, d), random_matrix(rng, 1, 2 * d)});
  check("mlp_layer",
        [&](Tape&, std::span<const Var> p) { return ad::sum_squares(gnn::mlp_layer(p[0], p[1], p[2])); },
        {h, random_matrix(rng, d, d), random_matrix(rng, 1, d)});

  for (auto variant : {gnn::GnnVariant::kRgcn, gnn::GnnVariant::kGcn, gnn::GnnVariant::kGat, gnn::GnnVariant::kMlp}) {
    for (double lambda : {0.0, 0.01}) {
      model::ModelConfig cfg;
      cfg.dim = 8;
      cfg.text_dim = 4;
      cfg.layers = 2;
      cfg.variant = variant;
      cfg.lambda = lambda;
      const auto init = model::ModelParams::init(cfg, seed + 1);
      const model::ModelGraph mg(fx.graph, variant);
      std::vector<Matrix> values;
      for (const auto& t : init.tensors()) values.push_back(t.value);
      // Biases start at zero; move them off the origin so their gradients are exercised.
      for (std::size_t k = 0; k < values.size(); ++k)
        if (values[k].rows() == 1) values[k] = random_matrix(rng, 1, values[k].cols(), 0.1);
      const ad::ScalarFn f = [&](Tape& tape, std::span<const Var> p) {
        const model::BoundParams bound(init, std::vector<Var>(p.begin(), p.end()));
        const Var r = model::encode_features(tape, fx.features, bound, cfg);
        const auto outs = model::forward(mg, r, bound, cfg);
        return model::loss(outs.probs, fx.labels, fx.masks.train, bound, cfg);
      };
      check("loss/" + std::string(gnn::variant_name(variant)) + (lambda == 0.0 ? "/lambda=0" : "/lambda=0.01"), f,
            values);
    }
  }
  return out;
}

}  // namespace botdetect::synthetic
