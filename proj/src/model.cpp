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
#include "botdetect/model.hpp"

#include <cmath>
#include <random>
#include <set>

namespace botdetect::model {
namespace {

const std::array<std::string, kNumModalities> kEncoderPrefix{"enc.desc", "enc.tweets", "enc.num", "enc.cat"};

std::string layer_name(gnn::GnnVariant v, std::size_t l, std::string_view leaf) {
  return std::string(gnn::variant_name(v)) + "." + std::to_string(l) + "." + std::string(leaf);
}

std::size_t input_width(const ModelConfig& cfg, Modality m) {
  switch (m) {
    case Modality::kDescription:
    case Modality::kTweets: return cfg.text_dim;
    case Modality::kNumerical: return ingest::kNumNumerical;
    case Modality::kCategorical: return ingest::kCategoricalWidth;
  }
  return 0;
}

const Matrix& modality_input(const FeatureBundle& b, Modality m) {
  switch (m) {
    case Modality::kDescription: return b.description;
    case Modality::kTweets: return b.tweets;
    case Modality::kNumerical: return b.numerical;
    case Modality::kCategorical: return b.categorical;
  }
  return b.numerical;
}

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("forward stage '") + name + "': " + e.what());
  }
}

}  // namespace

FeatureSet FeatureSet::parse(std::string_view text) {
  FeatureSet fs;
  if (text == "all") return fs;
  fs.enabled.fill(false);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(",+", start);
    if (end == std::string_view::npos) end = text.size();
    const auto tok = text.substr(start, end - start);
    bool matched = false;
    for (std::size_t m = 0; m < kNumModalities; ++m) {
      if (tok == kModalityNames[m]) {
        fs.enabled[m] = true;
        matched = true;
      }
    }
    if (!matched) throw UsageError("unknown feature set \"" + std::string(tok) + "\" (expected desc, tweets, num, cat or all)");
    start = end + 1;
  }
  return fs;
}

std::string FeatureSet::to_string() const {
  if (enabled[0] && enabled[1] && enabled[2] && enabled[3]) return "all";
  std::string s;
  for (std::size_t m = 0; m < kNumModalities; ++m) {
    if (!enabled[m]) continue;
    if (!s.empty()) s += "+";
    s += kModalityNames[m];
  }
  return s;
}

void ModelConfig::validate() const {
  if (dim == 0 || dim % 4 != 0) throw UsageError("D must be divisible by 4 (got " + std::to_string(dim) + ")");
  if (text_dim == 0) throw UsageError("text embedding width must be positive");
  if (layers < 1) throw UsageError("at least one GNN layer is required");
  if (!(slope > 0.0 && slope < 1.0)) throw UsageError("leaky-relu slope must lie in (0, 1)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be nonnegative");
  if (!features.any()) throw UsageError("at least one feature set must be enabled");
}

void ModelParams::add(std::string name, Matrix value) {
  if (!index_.emplace(name, tensors_.size()).second) throw ShapeError("duplicate parameter name " + name);
  tensors_.push_back({std::move(name), std::move(value)});
}

ModelParams ModelParams::init(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  auto weight = [&](std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    for (auto& v : m.values()) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1), portable across standard libraries
      v = bound * (2.0 * u - 1.0);
    }
    return m;
  };
  const std::size_t d = cfg.dim, q = cfg.dim / 4;
  ModelParams p;
  for (std::size_t m = 0; m < kNumModalities; ++m) {
    if (!cfg.features.enabled[m]) continue;
    p.add(kEncoderPrefix[m] + ".W", weight(q, input_width(cfg, static_cast<Modality>(m))));
    p.add(kEncoderPrefix[m] + ".b", Matrix(1, q));
  }
  p.add("in.W_1", weight(d, d));
  p.add("in.b_1", Matrix(1, d));
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    switch (cfg.variant) {
      case gnn::GnnVariant::kRgcn:
        p.add(layer_name(cfg.variant, l, "theta_self"), weight(d, d));
        p.add(layer_name(cfg.variant, l, "theta_following"), weight(d, d));
        p.add(layer_name(cfg.variant, l, "theta_follower"), weight(d, d));
        break;
      case gnn::GnnVariant::kGcn:
        p.add(layer_name(cfg.variant, l, "W"), weight(d, d));
        break;
      case gnn::GnnVariant::kGat:
        p.add(layer_name(cfg.variant, l, "W"), weight(d, d));
        p.add(layer_name(cfg.variant, l, "attn"), weight(1, 2 * d));
        break;
      case gnn::GnnVariant::kMlp:
        p.add(layer_name(cfg.variant, l, "W"), weight(d, d));
        p.add(layer_name(cfg.variant, l, "b"), Matrix(1, d));
        break;
    }
  }
  p.add("out.W_2", weight(d, d));
  p.add("out.b_2", Matrix(1, d));
  p.add("out.W_O", weight(2, d));
  p.add("out.b_O", Matrix(1, 2));
  return p;
}

ModelParams ModelParams::from_tensors(std::vector<NamedTensor> tensors) {
  ModelParams p;
  for (auto& t : tensors) p.add(std::move(t.name), std::move(t.value));
  return p;
}

bool ModelParams::contains(std::string_view name) const { return index_.find(name) != index_.end(); }

Matrix& ModelParams::at(std::string_view name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw DataError(DataErrorKind::kShapeMismatch, "missing parameter " + std::string(name));
  return tensors_[it->second].value;
}

const Matrix& ModelParams::at(std::string_view name) const { return const_cast<ModelParams*>(this)->at(name); }

std::size_t ModelParams::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.value.size();
  return n;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (a.tensors_.size() != b.tensors_.size()) return false;
  for (std::size_t k = 0; k < a.tensors_.size(); ++k)
    if (a.tensors_[k].name != b.tensors_[k].name || !(a.tensors_[k].value == b.tensors_[k].value)) return false;
  return true;
}

BoundParams::BoundParams(ad::Tape& tape, const ModelParams& params) : params_(&params) {
  vars_.reserve(params.size());
  for (const auto& t : params.tensors()) vars_.push_back(tape.parameter(t.value));
}

BoundParams::BoundParams(const ModelParams& params, std::vector<ad::Var> vars)
    : params_(&params), vars_(std::move(vars)) {
  if (vars_.size() != params.size()) throw ShapeError("BoundParams: variable count differs from parameter count");
}

ad::Var BoundParams::operator[](std::string_view name) const {
  const auto& ts = params_->tensors();
  for (std::size_t k = 0; k < ts.size(); ++k)
    if (ts[k].name == name) return vars_[k];
  throw DataError(DataErrorKind::kShapeMismatch, "missing parameter " + std::string(name));
}

std::vector<Matrix> BoundParams::gradients() const {
  std::vector<Matrix> g;
  g.reserve(vars_.size());
  for (const auto& v : vars_) g.push_back(v.grad());
  return g;
}

ModelGraph::ModelGraph(const HeteroGraph& graph, gnn::GnnVariant variant) : graph_(&graph) {
  if (variant == gnn::GnnVariant::kGcn || variant == gnn::GnnVariant::kGat)
    homog_ = gnn::HomogeneousGraph::from(graph);
}

const gnn::HomogeneousGraph& ModelGraph::homogeneous() const {
  if (!homog_) throw std::logic_error("ModelGraph: homogeneous graph was not built for this variant");
  return *homog_;
}

ad::Var encode_features(ad::Tape& tape, const FeatureBundle& bundle, const BoundParams& params,
                        const ModelConfig& cfg) {
  if (!cfg.features.any()) throw UsageError("encode_features: all modalities disabled");
  const std::size_t n = bundle.num_nodes(), q = cfg.dim / 4;
  std::vector<ad::Var> blocks;
  for (std::size_t m = 0; m < kNumModalities; ++m) {
    if (!cfg.features.enabled[m]) {
      blocks.push_back(tape.constant(Matrix(n, q)));
      continue;
    }
    const Matrix& x = modality_input(bundle, static_cast<Modality>(m));
    const ad::Var w = params[kEncoderPrefix[m] + ".W"];
    if (x.rows() != n || x.cols() != w.cols())
      throw ShapeError("encode_features: " + std::string(kModalityNames[m]) + " input is " + std::to_string(x.rows()) +
                       "x" + std::to_string(x.cols()) + ", encoder expects width " + std::to_string(w.cols()));
    const ad::Var b = params[kEncoderPrefix[m] + ".b"];
    blocks.push_back(stage("feature encoder", [&] {
      return ad::leaky_relu(ad::linear(tape.constant(x), w, b), cfg.slope);
    }));
  }
  return ad::concat_cols(blocks);
}

Outputs forward(const ModelGraph& graph, ad::Var features, const BoundParams& params, const ModelConfig& cfg) {
  if (features.cols() != cfg.dim) throw ShapeError("forward: feature width differs from D");
  if (features.rows() != graph.hetero().n_nodes) throw ShapeError("forward: feature rows differ from node count");
  ad::Var x = stage("input transform", [&] {
    return ad::leaky_relu(ad::linear(features, params["in.W_1"], params["in.b_1"]), cfg.slope);
  });
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    const std::string name = layer_name(cfg.variant, l, "");
    x = stage(name.c_str(), [&] {
      switch (cfg.variant) {
        case gnn::GnnVariant::kRgcn: {
          gnn::RgcnLayerParams p{params[layer_name(cfg.variant, l, "theta_self")],
                                 {params[layer_name(cfg.variant, l, "theta_following")],
                                  params[layer_name(cfg.variant, l, "theta_follower")]}};
          return gnn::rgcn_layer(x, graph.hetero(), p);
        }
        case gnn::GnnVariant::kGcn:
          return gnn::gcn_layer(x, graph.homogeneous(), params[layer_name(cfg.variant, l, "W")]);
        case gnn::GnnVariant::kGat:
          return gnn::gat_layer(x, graph.homogeneous(), params[layer_name(cfg.variant, l, "W")],
                                params[layer_name(cfg.variant, l, "attn")]);
        case gnn::GnnVariant::kMlp:
          break;
      }
      return gnn::mlp_layer(x, params[layer_name(cfg.variant, l, "W")], params[layer_name(cfg.variant, l, "b")]);
    });
    if (cfg.inter_layer_activation && l + 1 < cfg.layers) x = ad::leaky_relu(x, cfg.slope);
  }
  ad::Var h = stage("output transform", [&] {
    return ad::leaky_relu(ad::linear(x, params["out.W_2"], params["out.b_2"]), cfg.slope);
  });
  Outputs out;
  out.logits = stage("classifier", [&] { return ad::linear(h, params["out.W_O"], params["out.b_O"]); });
  out.probs = stage("softmax", [&] { return ad::softmax_rows(out.logits); });
  return out;
}

ad::Var loss(ad::Var probs, std::span<const int> labels, std::span<const std::uint8_t> mask,
             const BoundParams& params, const ModelConfig& cfg) {
  ad::Var total = ad::binary_cross_entropy(probs, labels, mask, cfg.reduction);
  if (cfg.lambda == 0.0) return total;
  for (const ad::Var& w : params.all()) total = ad::add(total, ad::scale(ad::sum_squares(w), cfg.lambda));
  return total;
}

Matrix predict_probs(const ModelGraph& graph, const FeatureBundle& bundle, const ModelParams& params,
                     const ModelConfig& cfg) {
  ad::Tape tape;
  BoundParams bound(tape, params);
  const ad::Var r = encode_features(tape, bundle, bound, cfg);
  return forward(graph, r, bound, cfg).probs.value();
}

ModelConfig infer_config(const ModelParams& params) {
  ModelConfig cfg;
  if (!params.contains("in.W_1")) throw DataError(DataErrorKind::kShapeMismatch, "checkpoint lacks in.W_1");
  cfg.dim = params.at("in.W_1").rows();
  for (std::size_t m = 0; m < kNumModalities; ++m) cfg.features.enabled[m] = params.contains(kEncoderPrefix[m] + ".W");
  if (params.contains("enc.desc.W")) cfg.text_dim = params.at("enc.desc.W").cols();
  else if (params.contains("enc.tweets.W")) cfg.text_dim = params.at("enc.tweets.W").cols();
  std::set<std::size_t> layers;
  std::optional<gnn::GnnVariant> variant;
  for (const auto& t : params.tensors()) {
    const auto dot = t.name.find('.');
    if (dot == std::string::npos) continue;
    const auto v = gnn::parse_variant(std::string_view(t.name).substr(0, dot));
    if (!v) continue;
    if (variant && *variant != *v) throw DataError(DataErrorKind::kShapeMismatch, "checkpoint mixes GNN variants");
    variant = v;
    const auto dot2 = t.name.find('.', dot + 1);
    layers.insert(std::stoul(t.name.substr(dot + 1, dot2 - dot - 1)));
  }
  if (!variant) throw DataError(DataErrorKind::kShapeMismatch, "checkpoint holds no GNN layers");
  cfg.variant = *variant;
  cfg.layers = layers.size();
  cfg.validate();
  return cfg;
}

}  // namespace botdetect::model
