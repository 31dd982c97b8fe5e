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
#include "botdetect/train.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace botdetect::train {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view optimizer_name(OptimizerKind k) { return k == OptimizerKind::kAdam ? "adam" : "sgd"; }

void TrainConfig::validate() const {
  if (epochs < 1) throw UsageError("epochs must be at least 1");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw UsageError("learning rate must be nonnegative");
  model.validate();
}

void Optimizer::step(model::ModelParams& params, const std::vector<Matrix>& grads) {
  auto& ts = params.tensors();
  if (grads.size() != ts.size()) throw ShapeError("optimizer: gradient count differs from parameter count");
  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
      auto w = ts[k].value.values();
      const auto g = grads[k].values();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr_ * g[i];
    }
    return;
  }
  if (m_.empty()) {
    for (const auto& t : ts) {
      m_.emplace_back(t.value.rows(), t.value.cols());
      v_.emplace_back(t.value.rows(), t.value.cols());
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < ts.size(); ++k) {
    auto w = ts[k].value.values();
    const auto g = grads[k].values();
    auto m = m_[k].values();
    auto v = v_[k].values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      const double mhat = m[i] / c1, vhat = v[i] / c2;
      w[i] -= lr_ * mhat / (std::sqrt(vhat) + kAdamEps);
    }
  }
}

double loss_and_gradients(const Dataset& data, const model::ModelGraph& graph, const model::ModelParams& params,
                          const model::ModelConfig& cfg, std::vector<Matrix>* grads) {
  ad::Tape tape;
  model::BoundParams bound(tape, params);
  const ad::Var r = model::encode_features(tape, data.features, bound, cfg);
  const auto out = model::forward(graph, r, bound, cfg);
  const ad::Var l = model::loss(out.probs, data.labels, data.masks.train, bound, cfg);
  if (grads) {
    tape.backward(l);
    *grads = bound.gradients();
  }
  return l.value()(0, 0);
}

Metrics evaluate_params(const Dataset& data, const model::ModelParams& params, const model::ModelConfig& cfg,
                        ingest::Split split) {
  const model::ModelGraph graph(data.graph, cfg.variant);
  const Matrix probs = model::predict_probs(graph, data.features, params, cfg);
  return evaluate(probs, data.labels, data.masks.of(split));
}

TrainResult train(const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  data.validate();
  if (ingest::SplitMasks::count(data.masks.train) == 0)
    throw DataError(DataErrorKind::kEmptyMask, "train: empty train mask");
  const bool has_val = ingest::SplitMasks::count(data.masks.val) > 0;
  const model::ModelGraph graph(data.graph, cfg.model.variant);

  TrainResult result;
  model::ModelParams params = model::ModelParams::init(cfg.model, cfg.seed);
  Optimizer opt(cfg.optimizer, cfg.lr);
  result.params = params;
  double best_f1 = -1.0;
  std::size_t since_best = 0;
  std::vector<Matrix> grads;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    try {
      rec.loss = loss_and_gradients(data, graph, params, cfg.model, &grads);
      if (!std::isfinite(rec.loss)) throw NumericalError("loss is not finite");
      opt.step(params, grads);
      if (has_val) {
        const Matrix probs = model::predict_probs(graph, data.features, params, cfg.model);
        rec.val = evaluate(probs, data.labels, data.masks.val);
      }
    } catch (const NumericalError& e) {
      throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    result.history.push_back(rec);
    if (!has_val || rec.val.f1 > best_f1) {
      best_f1 = rec.val.f1;
      result.params = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::ostringstream out;
  out << "epoch,loss,val_acc,val_f1,val_mcc\n";
  for (const auto& r : history)
    out << r.epoch << ',' << fmt_double(r.loss) << ',' << fmt_double(r.val.accuracy) << ',' << fmt_double(r.val.f1)
        << ',' << fmt_double(r.val.mcc) << '\n';
  return out.str();
}

namespace {

AblationRow run_one(const Dataset& data, const TrainConfig& cfg, std::string label, ingest::Split split) {
  const TrainResult res = train(data, cfg);
  return {std::move(label), evaluate_params(data, res.params, cfg.model, split)};
}

}  // namespace

std::vector<AblationRow> ablate_features(const Dataset& data, const TrainConfig& cfg,
                                         const std::vector<model::FeatureSet>& subsets, ingest::Split split) {
  std::vector<AblationRow> rows;
  for (const auto& fs : subsets) {
    TrainConfig c = cfg;
    c.model.features = fs;
    rows.push_back(run_one(data, c, fs.to_string(), split));
  }
  return rows;
}

std::vector<AblationRow> ablate_gnn(const Dataset& data, const TrainConfig& cfg,
                                    const std::vector<gnn::GnnVariant>& variants, ingest::Split split) {
  std::vector<AblationRow> rows;
  for (auto v : variants) {
    TrainConfig c = cfg;
    c.model.variant = v;
    rows.push_back(run_one(data, c, std::string(gnn::variant_name(v)), split));
  }
  return rows;
}

std::vector<AblationRow> ablate_layers(const Dataset& data, const TrainConfig& cfg,
                                       const std::vector<std::size_t>& layer_counts, ingest::Split split) {
  std::vector<AblationRow> rows;
  for (auto l : layer_counts) {
    TrainConfig c = cfg;
    c.model.layers = l;
    rows.push_back(run_one(data, c, "layers=" + std::to_string(l), split));
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "config,acc,f1,mcc\n";
  for (const auto& r : rows)
    out << r.config << ',' << fmt_double(r.metrics.accuracy) << ',' << fmt_double(r.metrics.f1) << ','
        << fmt_double(r.metrics.mcc) << '\n';
  return out.str();
}

}  // namespace botdetect::train
