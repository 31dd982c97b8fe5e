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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "botdetect/synthetic.hpp"
#include "botdetect/train.hpp"
#include "test_support.hpp"

using namespace botdetect;
using train::TrainConfig;

namespace {

TrainConfig small(gnn::GnnVariant v = gnn::GnnVariant::kRgcn) {
  TrainConfig c;
  c.model.dim = 8;
  c.model.text_dim = 4;
  c.model.variant = v;
  c.epochs = 30;
  c.lr = 1e-2;
  c.seed = 3;
  return c;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config validation") {
  TrainConfig c = small();
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = small();
  c.lr = -1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = small();
  c.model.dim = 6;
  CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("zero learning rate leaves the parameters untouched") {
  const Dataset d = synthetic::make_separable_fixture();
  for (auto opt : {train::OptimizerKind::kSgd, train::OptimizerKind::kAdam}) {
    TrainConfig c = small();
    c.lr = 0.0;
    c.optimizer = opt;
    c.epochs = 5;
    const auto r = train::train(d, c);
    CHECK(r.params == model::ModelParams::init(c.model, c.seed));
  }
}

TEST_CASE("separable fixture trains to a perfect fit") {
  // No validation users, so the final parameters are returned.
  Dataset d = synthetic::make_separable_fixture();
  d.masks.val.assign(6, 0);
  TrainConfig c = small();
  c.epochs = 200;
  const auto r = train::train(d, c);
  REQUIRE(r.history.size() == 200);
  CHECK(r.history.back().loss < r.history.front().loss);
  CHECK(train::evaluate_params(d, r.params, c.model, ingest::Split::kTrain).accuracy == 1.0);
  CHECK(train::evaluate_params(d, r.params, c.model, ingest::Split::kTest).accuracy == 1.0);
}

TEST_CASE("training is deterministic") {
  const Dataset d = synthetic::make_random_fixture(20, 3, 9);
  for (auto v : {gnn::GnnVariant::kRgcn, gnn::GnnVariant::kGat}) {
    const TrainConfig c = small(v);
    const auto a = train::train(d, c), b = train::train(d, c);
    CHECK(train::history_csv(a.history) == train::history_csv(b.history));
    CHECK(a.params == b.params);
  }
}

TEST_CASE("model selection keeps the best validation F1") {
  const Dataset d = synthetic::make_random_fixture(30, 3, 10);
  TrainConfig c = small();
  c.epochs = 40;
  const auto r = train::train(d, c);
  double best = -1.0;
  for (const auto& h : r.history) best = std::max(best, h.val.f1);
  REQUIRE(r.best_epoch >= 1);
  CHECK(r.history[r.best_epoch - 1].val.f1 == best);
  for (std::size_t e = 0; e + 1 < r.best_epoch; ++e) CHECK(r.history[e].val.f1 < best);
  const auto val = train::evaluate_params(d, r.params, c.model, ingest::Split::kVal);
  CHECK(val.f1 == best);
}

TEST_CASE("patience stops training after non-improving epochs") {
  const Dataset d = synthetic::make_random_fixture(30, 3, 11);
  TrainConfig c = small();
  c.epochs = 200;
  c.patience = 3;
  const auto r = train::train(d, c);
  CHECK(r.history.size() <= r.best_epoch + 3);
  if (r.history.size() < 200) CHECK(r.history.size() == r.best_epoch + 3);
}

TEST_CASE("without validation users the last epoch is kept") {
  Dataset d = synthetic::make_separable_fixture();
  d.masks.val.assign(6, 0);
  TrainConfig c = small();
  c.epochs = 7;
  const auto r = train::train(d, c);
  CHECK(r.best_epoch == 7);
  CHECK(r.history.back().val.f1 == 0.0);
}

TEST_CASE("empty train mask is rejected") {
  Dataset d = synthetic::make_separable_fixture();
  d.masks.train.assign(6, 0);
  try {
    train::train(d, small());
    FAIL("expected empty mask");
  } catch (const DataError& e) {
    CHECK(e.kind() == DataErrorKind::kEmptyMask);
  }
}

TEST_CASE("divergence names the epoch") {
  const Dataset d = synthetic::make_separable_fixture();
  TrainConfig c = small();
  c.optimizer = train::OptimizerKind::kSgd;
  c.lr = 1e300;
  c.epochs = 5;
  try {
    train::train(d, c);
    FAIL("expected divergence");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
}

TEST_CASE("history csv layout") {
  std::vector<train::EpochRecord> h(2);
  h[0].epoch = 1;
  h[0].loss = 0.5;
  h[1].epoch = 2;
  h[1].loss = 0.25;
  h[1].val = train::metrics_from_counts(1, 1, 0, 0);
  CHECK(train::history_csv(h) == "epoch,loss,val_acc,val_f1,val_mcc\n1,0.5,0,0,0\n2,0.25,1,1,1\n");
}

TEST_CASE("ablation sweeps") {
  const Dataset d = synthetic::make_separable_fixture();
  TrainConfig c = small();
  c.epochs = 40;

  const auto layers = train::ablate_layers(d, c, {1, 2, 3, 4}, ingest::Split::kTest);
  REQUIRE(layers.size() == 4);
  CHECK(layers[2].config == "layers=3");
  const std::string csv = train::ablation_csv(layers);
  CHECK(csv.rfind("config,acc,f1,mcc\n", 0) == 0);
  CHECK(count_lines(csv) == 5);

  const auto all = model::FeatureSet::parse("all");
  const auto feats = train::ablate_features(d, c, {all, all}, ingest::Split::kTest);
  REQUIRE(feats.size() == 2);
  CHECK(feats[0].config == "all");
  CHECK(train::ablation_csv({feats[0]}) == train::ablation_csv({feats[1]}));
  const auto plain = train::train(d, c);
  const auto direct = train::evaluate_params(d, plain.params, c.model, ingest::Split::kTest);
  CHECK(feats[0].metrics.accuracy == direct.accuracy);
  CHECK(feats[0].metrics.mcc == direct.mcc);

  Dataset edgeless = d;
  edgeless.graph = HeteroGraph::edgeless(6);
  const auto gnn_rows =
      train::ablate_gnn(edgeless, c, {gnn::GnnVariant::kRgcn, gnn::GnnVariant::kMlp}, ingest::Split::kTest);
  REQUIRE(gnn_rows.size() == 2);
  CHECK(gnn_rows[0].config == "rgcn");
  CHECK(gnn_rows[1].config == "mlp");
  CHECK(gnn_rows[0].metrics.accuracy == gnn_rows[1].metrics.accuracy);
}

TEST_CASE("feature subsets agree on a structure-only dataset") {
  synthetic::CommunityConfig cc;
  const Dataset d = synthetic::make_community_dataset(cc);
  TrainConfig c;
  c.model.dim = 32;
  c.model.text_dim = cc.text_dim;
  c.epochs = 200;
  c.lr = 1e-2;
  const auto rows = train::ablate_features(
      d, c, {model::FeatureSet::parse("all"), model::FeatureSet::parse("num,cat")}, ingest::Split::kTest);
  CHECK(rows[0].metrics.accuracy >= 0.9);
  CHECK(std::abs(rows[0].metrics.accuracy - rows[1].metrics.accuracy) <= 0.1);
}
