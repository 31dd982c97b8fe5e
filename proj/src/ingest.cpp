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
#include "botdetect/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "botdetect/binio.hpp"

namespace botdetect::ingest {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(DataErrorKind::kMalformed, source + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrorKind::kIo, "cannot open " + path.string());
  return in;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<double> read_count(const json& obj, std::string_view key, const std::string& source,
                                 std::size_t line) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) malformed(source, line, std::string(key) + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v) || v < 0.0 || v != std::floor(v))
    malformed(source, line, std::string(key) + " must be a nonnegative integer");
  return v;
}

std::optional<bool> read_flag(const json& obj, std::string_view key, const std::string& source, std::size_t line) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_boolean()) malformed(source, line, std::string(key) + " must be a boolean");
  return it->get<bool>();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_token(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(seed);
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

}  // namespace

const Mask& SplitMasks::of(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kVal: return val;
    case Split::kTest: return test;
    case Split::kUnlabeled: break;
  }
  throw std::invalid_argument("SplitMasks::of: no mask for unlabeled users");
}

std::size_t SplitMasks::count(const Mask& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), std::uint8_t{1}));
}

std::vector<UserRecord> parse_users(const std::filesystem::path& path) {
  auto in = open_text(path);
  return parse_users(in, path.string());
}

std::vector<UserRecord> parse_users(std::istream& in, const std::string& source) {
  std::vector<UserRecord> records;
  std::unordered_map<std::string, std::size_t> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      malformed(source, line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) malformed(source, line, "expected a JSON object");
    UserRecord rec;
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) malformed(source, line, "missing string field \"id\"");
    rec.user_id = id->get<std::string>();
    for (std::size_t k = 0; k < kNumNumerical; ++k) rec.numerical[k] = read_count(obj, kNumericalFields[k], source, line);
    for (std::size_t k = 0; k < kNumCategorical; ++k)
      rec.categorical[k] = read_flag(obj, kCategoricalFields[k], source, line);
    if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
      const std::string v = it->is_string() ? it->get<std::string>() : "";
      if (v == "human") rec.label = kHuman;
      else if (v == "bot") rec.label = kBot;
      else malformed(source, line, "label must be \"human\" or \"bot\"");
    }
    if (auto it = obj.find("split"); it != obj.end() && !it->is_null()) {
      const std::string v = it->is_string() ? it->get<std::string>() : "";
      if (v == "train") rec.split = Split::kTrain;
      else if (v == "val") rec.split = Split::kVal;
      else if (v == "test") rec.split = Split::kTest;
      else malformed(source, line, "split must be one of train, val, test");
    }
    if (auto it = obj.find("description"); it != obj.end() && it->is_string()) rec.description = it->get<std::string>();
    if (rec.label && rec.split == Split::kUnlabeled) malformed(source, line, "labeled user has no split");
    if (!rec.label && rec.split != Split::kUnlabeled) malformed(source, line, "user in a split has no label");
    if (auto [pos, fresh] = seen.emplace(rec.user_id, line); !fresh)
      throw DataError(DataErrorKind::kDuplicateId, source + ":" + std::to_string(line) + ": duplicate user id \"" +
                                                       rec.user_id + "\" (first seen on line " +
                                                       std::to_string(pos->second) + ")");
    records.push_back(std::move(rec));
  }
  return records;
}

SplitMasks make_masks(const std::vector<UserRecord>& records) {
  SplitMasks m;
  m.train.assign(records.size(), 0);
  m.val.assign(records.size(), 0);
  m.test.assign(records.size(), 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    switch (records[i].split) {
      case Split::kTrain: m.train[i] = 1; break;
      case Split::kVal: m.val[i] = 1; break;
      case Split::kTest: m.test[i] = 1; break;
      case Split::kUnlabeled: break;
    }
  }
  return m;
}

std::vector<int> labels_of(const std::vector<UserRecord>& records) {
  std::vector<int> labels(records.size(), kNoLabel);
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].label) labels[i] = *records[i].label;
  return labels;
}

std::unordered_map<std::string, std::uint32_t> index_users(const std::vector<UserRecord>& records) {
  std::unordered_map<std::string, std::uint32_t> index;
  index.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!index.emplace(records[i].user_id, static_cast<std::uint32_t>(i)).second)
      throw DataError(DataErrorKind::kDuplicateId, "duplicate user id \"" + records[i].user_id + "\"");
  }
  return index;
}

NumericStats compute_numeric_stats(const std::vector<UserRecord>& records, const SplitMasks& masks) {
  if (masks.train.size() != records.size()) throw ShapeError("compute_numeric_stats: mask length differs");
  if (SplitMasks::count(masks.train) == 0) throw DataError(DataErrorKind::kEmptyMask, "empty train mask");
  NumericStats stats;
  for (std::size_t k = 0; k < kNumNumerical; ++k) {
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (masks.train[i] && records[i].numerical[k]) {
        total += *records[i].numerical[k];
        ++n;
      }
    }
    if (n == 0)
      throw DataError(DataErrorKind::kMissingColumn,
                      "numerical column \"" + std::string(kNumericalFields[k]) + "\" has no values in the train split");
    const double mean = total / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (masks.train[i] && records[i].numerical[k]) {
        const double d = *records[i].numerical[k] - mean;
        sq += d * d;
      }
    }
    stats.mean[k] = mean;
    stats.stddev[k] = std::sqrt(sq / static_cast<double>(n));
  }
  return stats;
}

Matrix encode_numerical(const std::vector<UserRecord>& records, const NumericStats& stats) {
  Matrix out(records.size(), kNumNumerical);
  const long n = static_cast<long>(records.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (long i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kNumNumerical; ++k) {
      const auto& v = records[static_cast<std::size_t>(i)].numerical[k];
      if (!v || stats.stddev[k] <= kStdEpsilon) continue;
      out(static_cast<std::size_t>(i), k) = (*v - stats.mean[k]) / stats.stddev[k];
    }
  }
  return out;
}

Matrix encode_categorical(const std::vector<UserRecord>& records) {
  Matrix out(records.size(), kCategoricalWidth);
  const long n = static_cast<long>(records.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (long i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kNumCategorical; ++k) {
      const auto& v = records[static_cast<std::size_t>(i)].categorical[k];
      if (!v) continue;
      out(static_cast<std::size_t>(i), 2 * k + (*v ? 0 : 1)) = 1.0;
    }
  }
  return out;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, std::size_t expected_count) {
  auto r = binio::Reader::open(path);
  if (r.remaining() < 4 || r.bytes(4) != "BRGE")
    throw DataError(DataErrorKind::kBadMagic, path.string() + ": not an embedding file (bad magic)");
  EmbeddingMatrix m;
  m.count = r.u32();
  m.dim = r.u32();
  if (m.count != expected_count)
    throw DataError(DataErrorKind::kCountMismatch, path.string() + ": holds " + std::to_string(m.count) +
                                                       " rows, dataset has " + std::to_string(expected_count));
  if (m.dim == 0) throw DataError(DataErrorKind::kMalformed, path.string() + ": embedding dim is 0");
  const std::size_t payload = m.count * m.dim * 4;
  if (r.remaining() < payload)
    throw DataError(DataErrorKind::kTruncated, path.string() + ": payload truncated (" + std::to_string(r.remaining()) +
                                                   " of " + std::to_string(payload) + " bytes)");
  if (r.remaining() > payload) throw DataError(DataErrorKind::kMalformed, path.string() + ": trailing bytes");
  m.data = Matrix(m.count, m.dim);
  for (auto& v : m.data.values()) {
    v = static_cast<double>(r.f32());
    if (!std::isfinite(v)) throw DataError(DataErrorKind::kMalformed, path.string() + ": non-finite entry");
  }
  return m;
}

void save_embeddings(const std::filesystem::path& path, const Matrix& rows) {
  binio::Writer w;
  w.bytes("BRGE");
  w.u32(static_cast<std::uint32_t>(rows.rows()));
  w.u32(static_cast<std::uint32_t>(rows.cols()));
  for (double v : rows.values()) w.f32(static_cast<float>(v));
  w.save(path);
}

std::vector<EdgeRecord> parse_edges(const std::filesystem::path& path) {
  auto in = open_text(path);
  return parse_edges(in, path.string());
}

std::vector<EdgeRecord> parse_edges(std::istream& in, const std::string& source) {
  std::vector<EdgeRecord> edges;
  std::string text;
  std::size_t line = 0;
  bool has_relation = false, header_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    std::vector<std::string> cols;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) cols.push_back(trim(cell));
    if (!header_seen) {
      header_seen = true;
      if (cols.size() == 2 && cols[0] == "source" && cols[1] == "target") continue;
      if (cols.size() == 3 && cols[0] == "source" && cols[1] == "target" && cols[2] == "relation") {
        has_relation = true;
        continue;
      }
      malformed(source, line, "header must be source,target[,relation]");
    }
    if (cols.size() != (has_relation ? 3u : 2u)) malformed(source, line, "wrong number of columns");
    if (cols[0].empty() || cols[1].empty()) malformed(source, line, "empty user id");
    EdgeRecord e{cols[0], cols[1], std::nullopt};
    if (has_relation) {
      if (cols[2] == "following") e.relation = Relation::kFollowing;
      else if (cols[2] == "follower") e.relation = Relation::kFollower;
      else malformed(source, line, "relation must be following or follower");
    }
    edges.push_back(std::move(e));
  }
  if (!header_seen) malformed(source, line, "missing header");
  return edges;
}

HeteroGraph build_graph(const std::vector<EdgeRecord>& edges,
                        const std::unordered_map<std::string, std::uint32_t>& id_index) {
  const std::size_t n = id_index.size();
  std::array<std::vector<std::vector<std::uint32_t>>, kNumRelations> lists;
  for (auto& l : lists) l.resize(n);
  auto lookup = [&](const std::string& id) {
    auto it = id_index.find(id);
    if (it == id_index.end()) throw DataError(DataErrorKind::kUnknownId, "edge references unknown user id \"" + id + "\"");
    return it->second;
  };
  for (const auto& e : edges) {
    const std::uint32_t u = lookup(e.source), v = lookup(e.target);
    if (e.relation) {
      lists[static_cast<std::size_t>(*e.relation)][u].push_back(v);
    } else {
      // u follows v: v is among u's followings, u among v's followers.
      lists[static_cast<std::size_t>(Relation::kFollowing)][u].push_back(v);
      lists[static_cast<std::size_t>(Relation::kFollower)][v].push_back(u);
    }
  }
  HeteroGraph g;
  g.n_nodes = n;
  for (std::size_t r = 0; r < kNumRelations; ++r) g.relations[r] = Csr::from_lists(std::move(lists[r]));
  return g;
}

std::unordered_map<std::string, UserText> parse_texts(const std::filesystem::path& path) {
  auto in = open_text(path);
  std::unordered_map<std::string, UserText> texts;
  std::string text;
  std::size_t line = 0;
  const std::string source = path.string();
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      malformed(source, line, std::string("invalid JSON: ") + e.what());
    }
    auto id = obj.find("id");
    if (!obj.is_object() || id == obj.end() || !id->is_string()) malformed(source, line, "missing string field \"id\"");
    UserText t;
    if (auto it = obj.find("description"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) malformed(source, line, "description must be a string");
      t.description = it->get<std::string>();
    }
    if (auto it = obj.find("tweets"); it != obj.end() && !it->is_null()) {
      if (!it->is_array()) malformed(source, line, "tweets must be an array of strings");
      for (const auto& tw : *it) {
        if (!tw.is_string()) malformed(source, line, "tweets must be an array of strings");
        t.tweets.push_back(tw.get<std::string>());
      }
    }
    if (!texts.emplace(id->get<std::string>(), std::move(t)).second)
      throw DataError(DataErrorKind::kDuplicateId, source + ":" + std::to_string(line) + ": duplicate id");
  }
  return texts;
}

std::vector<Scalar> hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("hash_embed: dim must be positive");
  std::vector<Scalar> v(dim, 0.0);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const std::uint64_t h = hash_token(token, seed);
    v[h % dim] += (h >> 63) ? -1.0 : 1.0;
    token.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) flush();
    else token.push_back(static_cast<char>(std::tolower(c)));
  }
  flush();
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (double& x : v) x /= norm;
  }
  return v;
}

}  // namespace botdetect::ingest
