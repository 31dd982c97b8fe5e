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
#include "botdetect/dataset.hpp"

#include <cmath>

#include "botdetect/binio.hpp"

namespace botdetect {
namespace {

constexpr std::uint32_t kBundleVersion = 1;
constexpr std::uint8_t kNoLabelByte = 255;

[[noreturn]] void shape_error(const std::string& what) { throw DataError(DataErrorKind::kShapeMismatch, what); }

void write_matrix(binio::Writer& w, const Matrix& m) {
  for (double v : m.values()) w.f64(v);
}

Matrix read_matrix(binio::Reader& r, std::size_t rows, std::size_t cols) {
  r.need(rows * cols * 8);
  Matrix m(rows, cols);
  for (auto& v : m.values()) {
    v = r.f64();
    if (!std::isfinite(v)) throw DataError(DataErrorKind::kMalformed, r.source() + ": non-finite feature value");
  }
  return m;
}

}  // namespace

void FeatureBundle::validate() const {
  const std::size_t n = numerical.rows();
  if (numerical.cols() != ingest::kNumNumerical) shape_error("numerical features must have 6 columns");
  if (categorical.cols() != ingest::kCategoricalWidth) shape_error("categorical features must have 22 columns");
  if (description.rows() != n || tweets.rows() != n || categorical.rows() != n)
    shape_error("feature blocks have different row counts");
  if (description.cols() == 0 || tweets.cols() == 0) shape_error("text embedding width must be positive");
  for (const Matrix* m : {&description, &tweets, &numerical, &categorical})
    if (!m->all_finite()) throw DataError(DataErrorKind::kMalformed, "non-finite feature value");
}

void Dataset::validate() const {
  features.validate();
  const std::size_t n = num_nodes();
  if (graph.n_nodes != n) shape_error("graph node count differs from feature rows");
  graph.validate();
  if (labels.size() != n || user_ids.size() != n) shape_error("labels or ids do not match node count");
  for (const auto* m : {&masks.train, &masks.val, &masks.test})
    if (m->size() != n) shape_error("split mask length differs from node count");
  for (std::size_t i = 0; i < n; ++i) {
    const int members = masks.train[i] + masks.val[i] + masks.test[i];
    if (members > 1) throw DataError(DataErrorKind::kMalformed, "node " + std::to_string(i) + " is in several splits");
    if (members == 1 && labels[i] != ingest::kHuman && labels[i] != ingest::kBot)
      throw DataError(DataErrorKind::kMalformed, "node " + std::to_string(i) + " is in a split but has no label");
  }
}

void save_bundle(const std::filesystem::path& path, const Dataset& data) {
  data.validate();
  const std::size_t n = data.num_nodes();
  binio::Writer w;
  w.bytes("BRGB");
  w.u32(kBundleVersion);
  w.u32(static_cast<std::uint32_t>(n));
  w.u32(static_cast<std::uint32_t>(data.features.description.cols()));
  w.u32(static_cast<std::uint32_t>(data.features.tweets.cols()));
  for (const auto& id : data.user_ids) {
    w.u16(static_cast<std::uint16_t>(id.size()));
    w.bytes(id);
  }
  for (int l : data.labels) w.u8(l == ingest::kNoLabel ? kNoLabelByte : static_cast<std::uint8_t>(l));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t s = static_cast<std::uint8_t>(ingest::Split::kUnlabeled);
    if (data.masks.train[i]) s = static_cast<std::uint8_t>(ingest::Split::kTrain);
    else if (data.masks.val[i]) s = static_cast<std::uint8_t>(ingest::Split::kVal);
    else if (data.masks.test[i]) s = static_cast<std::uint8_t>(ingest::Split::kTest);
    w.u8(s);
  }
  for (double v : data.numeric_stats.mean) w.f64(v);
  for (double v : data.numeric_stats.stddev) w.f64(v);
  write_matrix(w, data.features.description);
  write_matrix(w, data.features.tweets);
  write_matrix(w, data.features.numerical);
  write_matrix(w, data.features.categorical);
  for (const auto& rel : data.graph.relations) {
    w.u64(rel.num_edges());
    for (auto o : rel.offsets()) w.u64(o);
    for (auto j : rel.indices()) w.u32(j);
  }
  w.save(path);
}

Dataset load_bundle(const std::filesystem::path& path, bool with_graph) {
  auto r = binio::Reader::open(path);
  if (r.remaining() < 4 || r.bytes(4) != "BRGB")
    throw DataError(DataErrorKind::kBadMagic, path.string() + ": not a dataset bundle (bad magic)");
  if (r.u32() != kBundleVersion) throw DataError(DataErrorKind::kMalformed, path.string() + ": unsupported bundle version");
  const std::size_t n = r.u32();
  const std::size_t desc_dim = r.u32(), tweet_dim = r.u32();
  Dataset d;
  d.user_ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) d.user_ids.push_back(r.bytes(r.u16()));
  d.labels.resize(n);
  for (auto& l : d.labels) {
    const std::uint8_t b = r.u8();
    if (b != 0 && b != 1 && b != kNoLabelByte) throw DataError(DataErrorKind::kMalformed, path.string() + ": bad label byte");
    l = b == kNoLabelByte ? ingest::kNoLabel : b;
  }
  d.masks.train.assign(n, 0);
  d.masks.val.assign(n, 0);
  d.masks.test.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    switch (r.u8()) {
      case 0: d.masks.train[i] = 1; break;
      case 1: d.masks.val[i] = 1; break;
      case 2: d.masks.test[i] = 1; break;
      case 3: break;
      default: throw DataError(DataErrorKind::kMalformed, path.string() + ": bad split byte");
    }
  }
  for (auto& v : d.numeric_stats.mean) v = r.f64();
  for (auto& v : d.numeric_stats.stddev) v = r.f64();
  d.features.description = read_matrix(r, n, desc_dim);
  d.features.tweets = read_matrix(r, n, tweet_dim);
  d.features.numerical = read_matrix(r, n, ingest::kNumNumerical);
  d.features.categorical = read_matrix(r, n, ingest::kCategoricalWidth);
  if (!with_graph) {
    d.graph = HeteroGraph::edgeless(n);
  } else {
    d.graph.n_nodes = n;
    for (auto& rel : d.graph.relations) {
      const std::size_t nnz = r.u64();
      r.need((n + 1) * 8 + nnz * 4);
      std::vector<std::size_t> offsets(n + 1);
      for (auto& o : offsets) o = r.u64();
      if (offsets.front() != 0 || offsets.back() != nnz)
        throw DataError(DataErrorKind::kMalformed, path.string() + ": inconsistent adjacency offsets");
      std::vector<std::vector<std::uint32_t>> lists(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (offsets[i + 1] < offsets[i])
          throw DataError(DataErrorKind::kMalformed, path.string() + ": adjacency offsets not monotone");
        for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) lists[i].push_back(r.u32());
      }
      rel = Csr::from_lists(std::move(lists));
    }
    if (r.remaining() != 0) throw DataError(DataErrorKind::kMalformed, path.string() + ": trailing bytes");
  }
  d.validate();
  return d;
}

}  // namespace botdetect
