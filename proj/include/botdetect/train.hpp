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
#ifndef BOTDETECT_TRAIN_HPP
#define BOTDETECT_TRAIN_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/dataset.hpp"
#include "botdetect/metrics.hpp"
#include "botdetect/model.hpp"

namespace botdetect::train {

enum class OptimizerKind { kSgd, kAdam };

std::string_view optimizer_name(OptimizerKind k);

struct TrainConfig {
  std::size_t epochs = 200;
  double lr = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::uint64_t seed = 0;
  /// Stop after this many epochs without a validation-F1 improvement;
  /// 0 disables early stopping.
  std::size_t patience = 0;
  model::ModelConfig model;

  void validate() const;
};

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8) or plain gradient descent.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr) : kind_(kind), lr_(lr) {}
  void step(model::ModelParams& params, const std::vector<Matrix>& grads);

 private:
  OptimizerKind kind_;
  double lr_;
  std::size_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct EpochRecord {
  std::size_t epoch = 0;   // 1-based
  double loss = 0.0;       // training loss before this epoch's update
  Metrics val;             // after the update
};

struct TrainResult {
  model::ModelParams params;  // snapshot with the best validation F1
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
};

/// Full-batch training on the train mask, model selection on the val mask.
/// Deterministic for a given seed. Throws NumericalError naming the epoch on
/// divergence.
TrainResult train(const Dataset& data, const TrainConfig& cfg);

/// Loss and gradients of the full objective at `params` (one forward and
/// backward pass).
double loss_and_gradients(const Dataset& data, const model::ModelGraph& graph, const model::ModelParams& params,
                          const model::ModelConfig& cfg, std::vector<Matrix>* grads);

Metrics evaluate_params(const Dataset& data, const model::ModelParams& params, const model::ModelConfig& cfg,
                        ingest::Split split);

/// `epoch,loss,val_acc,val_f1,val_mcc`
std::string history_csv(const std::vector<EpochRecord>& history);

struct AblationRow {
  std::string config;
  Metrics metrics;
};

/// Each entry retrains from cfg.seed with one knob changed and reports
/// metrics on `split`.
std::vector<AblationRow> ablate_features(const Dataset& data, const TrainConfig& cfg,
                                         const std::vector<model::FeatureSet>& subsets, ingest::Split split);
std::vector<AblationRow> ablate_gnn(const Dataset& data, const TrainConfig& cfg,
                                    const std::vector<gnn::GnnVariant>& variants, ingest::Split split);
std::vector<AblationRow> ablate_layers(const Dataset& data, const TrainConfig& cfg,
                                       const std::vector<std::size_t>& layer_counts, ingest::Split split);

/// `config,acc,f1,mcc`
std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace botdetect::train

#endif  // BOTDETECT_TRAIN_HPP
