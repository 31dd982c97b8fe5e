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
#include "botdetect/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "botdetect/checkpoint.hpp"
#include "botdetect/dataset.hpp"
#include "botdetect/error.hpp"
#include "botdetect/ingest.hpp"
#include "botdetect/synthetic.hpp"
#include "botdetect/train.hpp"

namespace botdetect::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(DataErrorKind::kIo, "cannot write " + path.string());
    out << text;
    if (!out) throw DataError(DataErrorKind::kIo, "write failed: " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrorKind::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(DataErrorKind::kMalformed, path.string() + ": " + e.what());
  }
}

json input_entry(const std::filesystem::path& path) { return {{"path", path.string()}, {"sha256", sha256_file(path)}}; }

json metrics_json(const train::Metrics& m) {
  return {{"accuracy", m.accuracy}, {"f1", m.f1}, {"mcc", m.mcc},
          {"tp", m.tp},             {"tn", m.tn}, {"fp", m.fp},   {"fn", m.fn}};
}

ingest::Split parse_split(const std::string& s) {
  if (s == "train") return ingest::Split::kTrain;
  if (s == "val") return ingest::Split::kVal;
  if (s == "test") return ingest::Split::kTest;
  throw UsageError("unknown split '" + s + "' (expected train, val or test)");
}

gnn::GnnVariant parse_gnn(const std::string& s) {
  const auto v = gnn::parse_variant(s);
  if (!v) throw UsageError("unknown GNN type '" + s + "' (expected rgcn, gcn, gat or mlp)");
  return *v;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

json model_config_json(const model::ModelConfig& c) {
  return {{"dim", c.dim},
          {"text_dim", c.text_dim},
          {"layers", c.layers},
          {"gnn", gnn::variant_name(c.variant)},
          {"slope", c.slope},
          {"inter_layer_activation", c.inter_layer_activation},
          {"lambda", c.lambda},
          {"reduction", c.reduction == ad::Reduction::kMean ? "mean" : "sum"},
          {"features", c.features.to_string()}};
}

model::ModelConfig model_config_from_json(const json& j) {
  model::ModelConfig c;
  try {
    c.dim = j.at("dim").get<std::size_t>();
    c.text_dim = j.at("text_dim").get<std::size_t>();
    c.layers = j.at("layers").get<std::size_t>();
    c.variant = parse_gnn(j.at("gnn").get<std::string>());
    c.slope = j.at("slope").get<double>();
    c.inter_layer_activation = j.at("inter_layer_activation").get<bool>();
    c.lambda = j.at("lambda").get<double>();
    c.reduction = j.at("reduction").get<std::string>() == "sum" ? ad::Reduction::kSum : ad::Reduction::kMean;
    c.features = model::FeatureSet::parse(j.at("features").get<std::string>());
  } catch (const json::exception& e) {
    throw DataError(DataErrorKind::kMalformed, std::string("model config: ") + e.what());
  }
  return c;
}

std::filesystem::path sidecar(const std::filesystem::path& base, const char* suffix) {
  return base.string() + suffix;
}

/// Options shared by train and ablate.
struct TrainFlags {
  std::size_t dim = 128;
  std::size_t layers = 2;
  std::string gnn = "rgcn";
  double lr = 1e-3;
  double lambda = 5e-3;
  double slope = 0.01;
  bool inter_activation = false;
  std::string reduction = "mean";
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
  std::string features = "all";
  std::size_t patience = 0;
  std::string optimizer = "adam";

  void add_to(CLI::App& app) {
    app.add_option("--dim", dim, "Hidden width D (divisible by 4)")->capture_default_str();
    app.add_option("--layers", layers, "Number of GNN layers")->capture_default_str();
    app.add_option("--gnn", gnn, "GNN type: rgcn, gcn, gat or mlp")->capture_default_str();
    app.add_option("--lr", lr, "Learning rate")->capture_default_str();
    app.add_option("--lambda", lambda, "L2 coefficient on all parameters")->capture_default_str();
    app.add_option("--slope", slope, "LeakyReLU negative slope")->capture_default_str();
    app.add_flag("--inter-activation", inter_activation, "Apply LeakyReLU between GNN layers");
    app.add_option("--reduction", reduction, "Cross-entropy reduction: mean or sum")->capture_default_str();
    app.add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    app.add_option("--seed", seed, "Initialisation seed")->capture_default_str();
    app.add_option("--features", features, "all, or modalities from desc,tweets,num,cat")->capture_default_str();
    app.add_option("--patience", patience, "Early-stopping patience in epochs (0 disables)")->capture_default_str();
    app.add_option("--optimizer", optimizer, "adam or sgd")->capture_default_str();
  }

  train::TrainConfig resolve(std::size_t text_dim) const {
    train::TrainConfig c;
    c.epochs = epochs;
    c.lr = lr;
    if (optimizer == "adam") c.optimizer = train::OptimizerKind::kAdam;
    else if (optimizer == "sgd") c.optimizer = train::OptimizerKind::kSgd;
    else throw UsageError("unknown optimizer '" + optimizer + "' (expected adam or sgd)");
    c.seed = seed;
    c.patience = patience;
    c.model.dim = dim;
    c.model.text_dim = text_dim;
    c.model.layers = layers;
    c.model.variant = parse_gnn(gnn);
    c.model.slope = slope;
    c.model.inter_layer_activation = inter_activation;
    c.model.lambda = lambda;
    if (reduction == "mean") c.model.reduction = ad::Reduction::kMean;
    else if (reduction == "sum") c.model.reduction = ad::Reduction::kSum;
    else throw UsageError("unknown reduction '" + reduction + "' (expected mean or sum)");
    c.model.features = model::FeatureSet::parse(features);
    c.validate();
    return c;
  }
};

json train_config_json(const train::TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"lr", c.lr},
          {"optimizer", train::optimizer_name(c.optimizer)},
          {"seed", c.seed},
          {"patience", c.patience},
          {"model", model_config_json(c.model)}};
}

std::size_t bundle_text_dim(const Dataset& d) {
  const std::size_t a = d.features.description.cols(), b = d.features.tweets.cols();
  if (a != b)
    throw DataError(DataErrorKind::kShapeMismatch, "description and tweet embeddings differ in width (" +
                                                       std::to_string(a) + " vs " + std::to_string(b) + ")");
  return a;
}

// ---- prepare ---------------------------------------------------------------

struct PrepareFlags {
  std::filesystem::path users, edges, out, emb_desc, emb_tweets, tweets_jsonl;
  std::size_t hash_dim = 0;
  std::uint64_t hash_seed = 0;
};

Matrix hash_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t dim) {
  Matrix m(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < dim; ++c) m(i, c) = rows[i][c];
  return m;
}

int cmd_prepare(const PrepareFlags& f) {
  const auto t0 = Clock::now();
  const auto records = ingest::parse_users(f.users);
  Dataset d;
  for (const auto& r : records) d.user_ids.push_back(r.user_id);
  d.masks = ingest::make_masks(records);
  if (ingest::SplitMasks::count(d.masks.train) == 0)
    throw DataError(DataErrorKind::kEmptyMask, f.users.string() + ": empty train mask (no user has split \"train\")");
  d.labels = ingest::labels_of(records);
  d.numeric_stats = ingest::compute_numeric_stats(records, d.masks);
  d.features.numerical = ingest::encode_numerical(records, d.numeric_stats);
  d.features.categorical = ingest::encode_categorical(records);
  const auto index = ingest::index_users(records);
  d.graph = ingest::build_graph(ingest::parse_edges(f.edges), index);

  const std::size_t n = records.size();
  json inputs = {{"users", input_entry(f.users)}, {"edges", input_entry(f.edges)}};
  if (f.hash_dim > 0) {
    std::unordered_map<std::string, ingest::UserText> texts;
    if (!f.tweets_jsonl.empty()) {
      texts = ingest::parse_texts(f.tweets_jsonl);
      inputs["tweets_jsonl"] = input_entry(f.tweets_jsonl);
    }
    std::vector<std::vector<Scalar>> desc(n), tweets(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto it = texts.find(records[i].user_id);
      std::string description = records[i].description.value_or("");
      if (it != texts.end() && !it->second.description.empty()) description = it->second.description;
      desc[i] = ingest::hash_embed(description, f.hash_dim, f.hash_seed);
      tweets[i].assign(f.hash_dim, 0.0);
      if (it == texts.end() || it->second.tweets.empty()) continue;
      for (const auto& tw : it->second.tweets) {
        const auto v = ingest::hash_embed(tw, f.hash_dim, f.hash_seed);
        for (std::size_t c = 0; c < f.hash_dim; ++c) tweets[i][c] += v[c];
      }
      const double count = static_cast<double>(it->second.tweets.size());
      for (auto& x : tweets[i]) x /= count;
    }
    d.features.description = hash_rows(desc, f.hash_dim);
    d.features.tweets = hash_rows(tweets, f.hash_dim);
  } else {
    d.features.description = ingest::load_embeddings(f.emb_desc, n).data;
    d.features.tweets = ingest::load_embeddings(f.emb_tweets, n).data;
    inputs["emb_desc"] = input_entry(f.emb_desc);
    inputs["emb_tweets"] = input_entry(f.emb_tweets);
  }
  bundle_text_dim(d);
  d.validate();
  save_bundle(f.out, d);

  const json manifest = {
      {"command", "prepare"},
      {"config",
       {{"hash_embed_dim", f.hash_dim}, {"hash_seed", f.hash_seed}, {"text_source", f.hash_dim > 0 ? "hash" : "bre"}}},
      {"inputs", inputs},
      {"seed", f.hash_seed},
      {"artifacts", {{"bundle", f.out.string()}}},
      {"summary",
       {{"n_nodes", n},
        {"following_edges", d.graph.relation(Relation::kFollowing).num_edges()},
        {"follower_edges", d.graph.relation(Relation::kFollower).num_edges()},
        {"train", ingest::SplitMasks::count(d.masks.train)},
        {"val", ingest::SplitMasks::count(d.masks.val)},
        {"test", ingest::SplitMasks::count(d.masks.test)}}},
      {"timings_s", {{"total", seconds_since(t0)}}}};
  write_text(sidecar(f.out, ".manifest.json"), manifest.dump(2) + "\n");
  std::cout << "n_nodes=" << n << " edges=" << d.graph.num_edges() << " -> " << f.out.string() << "\n";
  return kExitOk;
}

// ---- train -----------------------------------------------------------------

struct TrainCmdFlags {
  std::filesystem::path data, out_ckpt, history, manifest;
  TrainFlags train;
};

int cmd_train(const TrainCmdFlags& f) {
  const auto t0 = Clock::now();
  const bool needs_graph = parse_gnn(f.train.gnn) != gnn::GnnVariant::kMlp;
  const Dataset data = load_bundle(f.data, needs_graph);
  const auto cfg = f.train.resolve(bundle_text_dim(data));
  const double t_load = seconds_since(t0);

  const auto t1 = Clock::now();
  const auto result = train::train(data, cfg);
  const double t_train = seconds_since(t1);

  const auto history_path = f.history.empty() ? sidecar(f.out_ckpt, ".history.csv") : f.history;
  const auto manifest_path = f.manifest.empty() ? sidecar(f.out_ckpt, ".manifest.json") : f.manifest;
  const auto config_path = sidecar(f.out_ckpt, ".config.json");
  save_checkpoint(f.out_ckpt, result.params.tensors());
  write_text(history_path, train::history_csv(result.history));
  write_text(config_path, model_config_json(cfg.model).dump(2) + "\n");

  const bool has_val = ingest::SplitMasks::count(data.masks.val) > 0;
  json final_val = nullptr;
  if (has_val) final_val = metrics_json(train::evaluate_params(data, result.params, cfg.model, ingest::Split::kVal));
  const json manifest = {{"command", "train"},
                         {"config", train_config_json(cfg)},
                         {"inputs", {{"data", input_entry(f.data)}}},
                         {"seed", cfg.seed},
                         {"artifacts",
                          {{"checkpoint", f.out_ckpt.string()},
                           {"history", history_path.string()},
                           {"model_config", config_path.string()}}},
                         {"epochs_run", result.history.size()},
                         {"best_epoch", result.best_epoch},
                         {"final_val", final_val},
                         {"timings_s", {{"load", t_load}, {"train", t_train}, {"total", seconds_since(t0)}}}};
  write_text(manifest_path, manifest.dump(2) + "\n");

  if (has_val) {
    std::cout << "val accuracy=" << fmt_double(final_val["accuracy"].get<double>())
              << " f1=" << fmt_double(final_val["f1"].get<double>())
              << " mcc=" << fmt_double(final_val["mcc"].get<double>()) << " (best epoch " << result.best_epoch
              << ")\n";
  } else {
    std::cout << "no validation users; kept parameters from epoch " << result.best_epoch << "\n";
  }
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalFlags {
  std::filesystem::path data, ckpt, config;
  std::string split = "test";
};

int cmd_eval(const EvalFlags& f) {
  const auto split = parse_split(f.split);
  const auto params = model::ModelParams::from_tensors(load_checkpoint(f.ckpt));
  model::ModelConfig cfg = model::infer_config(params);
  const auto config_path = f.config.empty() ? sidecar(f.ckpt, ".config.json") : f.config;
  if (!f.config.empty() || std::filesystem::exists(config_path)) {
    const auto stored = model_config_from_json(read_json(config_path));
    if (stored.dim != cfg.dim || stored.layers != cfg.layers || stored.variant != cfg.variant ||
        stored.features != cfg.features)
      throw DataError(DataErrorKind::kShapeMismatch, "model config " + config_path.string() + " does not match checkpoint");
    cfg = stored;
  }
  const Dataset data = load_bundle(f.data, cfg.variant != gnn::GnnVariant::kMlp);
  if (cfg.features.has(model::Modality::kDescription) || cfg.features.has(model::Modality::kTweets)) {
    if (bundle_text_dim(data) != cfg.text_dim)
      throw DataError(DataErrorKind::kShapeMismatch, "bundle text width " + std::to_string(bundle_text_dim(data)) +
                                                         " differs from checkpoint " + std::to_string(cfg.text_dim));
  }
  const auto m = train::evaluate_params(data, params, cfg, split);
  std::cout << "accuracy,f1,mcc\n" << fmt_double(m.accuracy) << ',' << fmt_double(m.f1) << ',' << fmt_double(m.mcc) << '\n';
  return kExitOk;
}

// ---- ablate ----------------------------------------------------------------

struct AblateFlags {
  std::filesystem::path data, out;
  std::string axis, values, split = "test";
  TrainFlags train;
};

int cmd_ablate(const AblateFlags& f) {
  const auto t0 = Clock::now();
  const auto split = parse_split(f.split);
  const Dataset data = load_bundle(f.data, true);
  const auto cfg = f.train.resolve(bundle_text_dim(data));
  std::vector<train::AblationRow> rows;
  std::string values = f.values;
  if (f.axis == "features") {
    if (values.empty()) values = "all,desc,tweets,num,cat";
    std::vector<model::FeatureSet> subsets;
    for (const auto& v : split_list(values, ',')) subsets.push_back(model::FeatureSet::parse(v));
    if (subsets.empty()) throw UsageError("--values lists no feature sets");
    rows = train::ablate_features(data, cfg, subsets, split);
  } else if (f.axis == "gnn") {
    if (values.empty()) values = "rgcn,gcn,gat,mlp";
    std::vector<gnn::GnnVariant> variants;
    for (const auto& v : split_list(values, ',')) variants.push_back(parse_gnn(v));
    if (variants.empty()) throw UsageError("--values lists no GNN types");
    rows = train::ablate_gnn(data, cfg, variants, split);
  } else if (f.axis == "layers") {
    if (values.empty()) values = "1,2,3,4";
    std::vector<std::size_t> counts;
    for (const auto& v : split_list(values, ',')) {
      std::size_t pos = 0;
      unsigned long k = 0;
      try {
        k = std::stoul(v, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != v.size()) throw UsageError("layer count '" + v + "' is not a nonnegative integer");
      counts.push_back(k);
    }
    if (counts.empty()) throw UsageError("--values lists no layer counts");
    for (auto k : counts) {
      auto c = cfg;
      c.model.layers = k;
      c.validate();
    }
    rows = train::ablate_layers(data, cfg, counts, split);
  } else {
    throw UsageError("unknown axis '" + f.axis + "' (expected features, gnn or layers)");
  }
  const std::string csv = train::ablation_csv(rows);
  if (f.out.empty()) {
    std::cout << csv;
  } else {
    write_text(f.out, csv);
    const json manifest = {{"command", "ablate"},
                           {"config",
                            {{"axis", f.axis}, {"values", values}, {"split", f.split}, {"base", train_config_json(cfg)}}},
                           {"inputs", {{"data", input_entry(f.data)}}},
                           {"seed", cfg.seed},
                           {"artifacts", {{"csv", f.out.string()}}},
                           {"timings_s", {{"total", seconds_since(t0)}}}};
    write_text(sidecar(f.out, ".manifest.json"), manifest.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- gradcheck -------------------------------------------------------------

int cmd_gradcheck(std::uint64_t seed, double tolerance) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool ok = true;
  for (const auto& r : synthetic::run_gradient_suite(seed)) {
    const bool pass = r.max_error < tolerance;
    ok = ok && pass;
    worst = std::max(worst, r.max_error);
    char line[160];
    std::snprintf(line, sizeof line, "%-30s %.3e %s\n", r.name.c_str(), r.max_error, pass ? "ok" : "FAIL");
    std::cout << line;
  }
  char line[120];
  std::snprintf(line, sizeof line, "max relative error %.3e (tolerance %.1e) in %.2fs\n", worst, tolerance,
                seconds_since(t0));
  std::cout << line;
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataErrorKind::kIo, "cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: digest init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 15]);
  }
  return hex;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Graph-based social bot detection: prepare data, train, evaluate and ablate."};
  app.require_subcommand(1);

  PrepareFlags prep;
  auto* prepare = app.add_subcommand("prepare", "Build a dataset bundle from users, edges and text embeddings");
  prepare->add_option("--users", prep.users, "users.jsonl")->required()->check(CLI::ExistingFile);
  prepare->add_option("--edges", prep.edges, "edges.csv with header source,target[,relation]")
      ->required()
      ->check(CLI::ExistingFile);
  auto* emb_desc = prepare->add_option("--emb-desc", prep.emb_desc, "Description embeddings (.bre)")
                       ->check(CLI::ExistingFile);
  auto* emb_tweets = prepare->add_option("--emb-tweets", prep.emb_tweets, "Tweet embeddings (.bre)")
                         ->check(CLI::ExistingFile);
  auto* hash_dim = prepare->add_option("--hash-embed-dim", prep.hash_dim, "Use hashed text features of this width");
  auto* tweets_jsonl = prepare->add_option("--tweets-jsonl", prep.tweets_jsonl, "Texts for hashed features")
                           ->check(CLI::ExistingFile);
  prepare->add_option("--hash-seed", prep.hash_seed, "Seed for hashed text features")->capture_default_str();
  prepare->add_option("--out", prep.out, "Output bundle path")->required();
  emb_desc->needs(emb_tweets);
  emb_tweets->needs(emb_desc);
  hash_dim->excludes(emb_desc)->excludes(emb_tweets);
  tweets_jsonl->needs(hash_dim);

  TrainCmdFlags trn;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a bundle");
  train_cmd->add_option("--data", trn.data, "Dataset bundle")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out-ckpt", trn.out_ckpt, "Checkpoint output path")->required();
  train_cmd->add_option("--history", trn.history, "History CSV path (default <ckpt>.history.csv)");
  train_cmd->add_option("--manifest", trn.manifest, "Run manifest path (default <ckpt>.manifest.json)");
  trn.train.add_to(*train_cmd);

  EvalFlags ev;
  auto* eval_cmd = app.add_subcommand("eval", "Print accuracy,f1,mcc of a checkpoint on one split");
  eval_cmd->add_option("--data", ev.data, "Dataset bundle")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--ckpt", ev.ckpt, "Checkpoint")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--config", ev.config, "Model config JSON (default <ckpt>.config.json when present)");
  eval_cmd->add_option("--split", ev.split, "train, val or test")->capture_default_str();

  AblateFlags abl;
  auto* ablate = app.add_subcommand("ablate", "Retrain along one axis and emit config,acc,f1,mcc");
  ablate->add_option("--data", abl.data, "Dataset bundle")->required()->check(CLI::ExistingFile);
  ablate->add_option("--axis", abl.axis, "features, gnn or layers")->required();
  ablate->add_option("--values", abl.values,
                     "Comma-separated sweep; feature sets join modalities with '+', e.g. all,desc+tweets,num+cat");
  ablate->add_option("--split", abl.split, "Split to report")->capture_default_str();
  ablate->add_option("--out", abl.out, "CSV output path (default stdout)");
  abl.train.add_to(*ablate);

  std::uint64_t gc_seed = 7;
  double gc_tol = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every op, layer and loss");
  gradcheck->add_option("--seed", gc_seed, "Fixture seed")->capture_default_str();
  gradcheck->add_option("--tolerance", gc_tol, "Maximum relative error")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (prepare->parsed()) {
      if (prep.hash_dim == 0 && prep.emb_desc.empty())
        throw UsageError("prepare needs --emb-desc/--emb-tweets or --hash-embed-dim");
      return cmd_prepare(prep);
    }
    if (train_cmd->parsed()) return cmd_train(trn);
    if (eval_cmd->parsed()) return cmd_eval(ev);
    if (ablate->parsed()) return cmd_ablate(abl);
    if (gradcheck->parsed()) return cmd_gradcheck(gc_seed, gc_tol);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ShapeError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace botdetect::cli
