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
#ifndef BOTDETECT_MODEL_HPP
#define BOTDETECT_MODEL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botdetect/checkpoint.hpp"
#include "botdetect/dataset.hpp"
#include "botdetect/layers.hpp"
#include "botdetect/tape.hpp"

namespace botdetect::model {

enum class Modality : std::size_t { kDescription = 0, kTweets = 1, kNumerical = 2, kCategorical = 3 };
inline constexpr std::size_t kNumModalities = 4;
inline constexpr std::array<std::string_view, kNumModalities> kModalityNames{"desc", "tweets", "num", "cat"};

/// Which of the four input modalities feed the model.
struct FeatureSet {
  std::array<bool, kNumModalities> enabled{true, true, true, true};

  bool has(Modality m) const { return enabled[static_cast<std::size_t>(m)]; }
  bool any() const { return enabled[0] || enabled[1] || enabled[2] || enabled[3]; }
  /// "all" or a list of modality names joined by ',' or '+', e.g. "num,cat".
  static FeatureSet parse(std::string_view text);
  /// "all" when every modality is on, else names joined by '+'.
  std::string to_string() const;
  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

struct ModelConfig {
  std::size_t dim = 128;        // D, divisible by 4
  std::size_t text_dim = 768;   // D_s
  std::size_t layers = 2;
  gnn::GnnVariant variant = gnn::GnnVariant::kRgcn;
  Scalar slope = 0.01;
  bool inter_layer_activation = false;
  Scalar lambda = 5e-3;
  ad::Reduction reduction = ad::Reduction::kMean;
  FeatureSet features;

  /// Throws UsageError naming the first violated constraint.
  void validate() const;
};

/// Learnable tensors keyed by canonical names, in creation order.
class ModelParams {
 public:
  /// Fan-in uniform init U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights,
  /// zeros for biases; draws come from a seeded mt19937_64.
  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);
  static ModelParams from_tensors(std::vector<NamedTensor> tensors);

  bool contains(std::string_view name) const;
  Matrix& at(std::string_view name);
  const Matrix& at(std::string_view name) const;
  const std::vector<NamedTensor>& tensors() const { return tensors_; }
  std::vector<NamedTensor>& tensors() { return tensors_; }
  std::size_t size() const { return tensors_.size(); }
  std::size_t scalar_count() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);

 private:
  void add(std::string name, Matrix value);
  std::vector<NamedTensor> tensors_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parameters registered on a tape as differentiable leaves.
class BoundParams {
 public:
  BoundParams(ad::Tape& tape, const ModelParams& params);
  /// Binds leaves that are already on a tape, in ModelParams order.
  BoundParams(const ModelParams& params, std::vector<ad::Var> vars);

  ad::Var operator[](std::string_view name) const;
  std::span<const ad::Var> all() const { return vars_; }
  /// Copies accumulated gradients, in ModelParams order.
  std::vector<Matrix> gradients() const;

 private:
  const ModelParams* params_;
  std::vector<ad::Var> vars_;
};

/// Graph plus whatever derived structure the variant needs.
class ModelGraph {
 public:
  ModelGraph(const HeteroGraph& graph, gnn::GnnVariant variant);
  const HeteroGraph& hetero() const { return *graph_; }
  const gnn::HomogeneousGraph& homogeneous() const;

 private:
  const HeteroGraph* graph_;
  std::optional<gnn::HomogeneousGraph> homog_;
};

struct Outputs {
  ad::Var logits;  // n x 2
  ad::Var probs;   // n x 2, row softmax
};

/// r = [r_desc ; r_tweets ; r_num ; r_cat], each block
/// leaky_relu(x W^T + b) of width D/4, or zeros when the modality is off.
ad::Var encode_features(ad::Tape& tape, const FeatureBundle& bundle, const BoundParams& params,
                        const ModelConfig& cfg);

/// Input transform, `layers` GNN layers, output MLP and softmax head.
/// NumericalError messages name the failing stage.
Outputs forward(const ModelGraph& graph, ad::Var features, const BoundParams& params, const ModelConfig& cfg);

/// Cross-entropy on P(bot) over the mask plus lambda times the squared norm
/// of every parameter, biases included.
ad::Var loss(ad::Var probs, std::span<const int> labels, std::span<const std::uint8_t> mask,
             const BoundParams& params, const ModelConfig& cfg);

/// Full-graph inference without keeping gradients around.
Matrix predict_probs(const ModelGraph& graph, const FeatureBundle& bundle, const ModelParams& params,
                     const ModelConfig& cfg);

/// Recovers D, D_s, layer count, variant and enabled modalities from
/// parameter names and shapes. Other fields keep their defaults.
ModelConfig infer_config(const ModelParams& params);

}  // namespace botdetect::model

#endif  // BOTDETECT_MODEL_HPP
