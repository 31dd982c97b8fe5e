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
#ifndef BOTDETECT_TESTS_TEST_SUPPORT_HPP
#define BOTDETECT_TESTS_TEST_SUPPORT_HPP

// Fixtures and brute-force oracles. The oracles work from raw follow pairs
// and plain loops; they share no code with the library's CSR or kernels.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <unistd.h>

#include "botdetect/hetero_graph.hpp"
#include "botdetect/ingest.hpp"
#include "botdetect/matrix.hpp"
#include "botdetect/synthetic.hpp"

namespace botdetect::testing {

using Follows = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
using Rng = synthetic::Rng;

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = scale * rng.uniform(-1.0, 1.0);
  return m;
}

inline Follows random_follows(Rng& rng, std::size_t n, std::size_t count) {
  Follows f;
  if (n < 2) return f;
  while (f.size() < count) {
    const auto u = static_cast<std::uint32_t>(rng.below(n));
    const auto v = static_cast<std::uint32_t>(rng.below(n));
    if (u != v) f.emplace_back(u, v);
  }
  return f;
}

inline std::string node_id(std::size_t i) { return "n" + std::to_string(i); }

/// Builds the graph through the public ingest path.
inline HeteroGraph graph_of(std::size_t n, const Follows& follows) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < n; ++i) index[node_id(i)] = static_cast<std::uint32_t>(i);
  std::vector<ingest::EdgeRecord> edges;
  for (auto [u, v] : follows) edges.push_back({node_id(u), node_id(v), std::nullopt});
  auto g = ingest::build_graph(edges, index);
  g.n_nodes = n;
  return g;
}

inline std::vector<std::uint32_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::uint32_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

/// Row i of the input becomes row perm[i] of the output.
inline Matrix permute_rows(const Matrix& m, const std::vector<std::uint32_t>& perm) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < m.cols(); ++c) out(perm[i], c) = m(i, c);
  return out;
}

inline Follows permute_follows(const Follows& f, const std::vector<std::uint32_t>& perm) {
  Follows out;
  for (auto [u, v] : f) out.emplace_back(perm[u], perm[v]);
  return out;
}

/// [0] = accounts each node follows, [1] = accounts following each node.
inline std::array<std::vector<std::set<std::uint32_t>>, 2> oracle_neighbors(std::size_t n, const Follows& f) {
  std::array<std::vector<std::set<std::uint32_t>>, 2> s;
  s[0].resize(n);
  s[1].resize(n);
  for (auto [u, v] : f) {
    s[0][u].insert(v);
    s[1][v].insert(u);
  }
  return s;
}

/// y = W x for a single row vector x.
inline std::vector<double> oracle_apply(const Matrix& w, const std::vector<double>& x) {
  std::vector<double> y(w.rows(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) y[r] += w(r, c) * x[c];
  return y;
}

inline std::vector<double> row_of(const Matrix& m, std::size_t i) {
  return std::vector<double>(m.row(i).begin(), m.row(i).end());
}

inline Matrix oracle_mean_aggregate(const Matrix& h, const std::vector<std::set<std::uint32_t>>& nbrs) {
  Matrix out(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (nbrs[i].empty()) continue;
    for (auto j : nbrs[i])
      for (std::size_t c = 0; c < h.cols(); ++c) out(i, c) += h(j, c);
    for (std::size_t c = 0; c < h.cols(); ++c) out(i, c) /= static_cast<double>(nbrs[i].size());
  }
  return out;
}

/// x_i' = Theta_self x_i + sum_r sum_{j in N_r(i)} (1/|N_r(i)|) Theta_r x_j, node by node.
inline Matrix oracle_rgcn(const Matrix& h, const Follows& f, const Matrix& theta_self, const Matrix& theta_following,
                          const Matrix& theta_follower) {
  const std::size_t n = h.rows(), d = h.cols();
  const auto nb = oracle_neighbors(n, f);
  const Matrix* theta_r[2] = {&theta_following, &theta_follower};
  Matrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto acc = oracle_apply(theta_self, row_of(h, i));
    for (std::size_t r = 0; r < 2; ++r) {
      const double inv = nb[r][i].empty() ? 0.0 : 1.0 / static_cast<double>(nb[r][i].size());
      for (auto j : nb[r][i]) {
        const auto msg = oracle_apply(*theta_r[r], row_of(h, j));
        for (std::size_t c = 0; c < d; ++c) acc[c] += inv * msg[c];
      }
    }
    for (std::size_t c = 0; c < d; ++c) out(i, c) = acc[c];
  }
  return out;
}

/// Union of both relations, symmetrised, with self-loops.
inline std::vector<std::set<std::uint32_t>> oracle_homogeneous(std::size_t n, const Follows& f) {
  std::vector<std::set<std::uint32_t>> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i].insert(static_cast<std::uint32_t>(i));
  for (auto [u, v] : f) {
    s[u].insert(v);
    s[v].insert(u);
  }
  return s;
}

/// D^-1/2 (A + I) D^-1/2 H W^T from a dense adjacency matrix.
inline Matrix oracle_gcn(const Matrix& h, const Follows& f, const Matrix& w) {
  const std::size_t n = h.rows();
  const auto s = oracle_homogeneous(n, f);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : s[i]) a(i, j) = 1.0;
  std::vector<double> deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += a(i, j);
  Matrix out(n, w.rows());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a(i, j) == 0.0) continue;
      const double norm = 1.0 / (std::sqrt(deg[i]) * std::sqrt(deg[j]));
      const auto wh = oracle_apply(w, row_of(h, j));
      for (std::size_t c = 0; c < wh.size(); ++c) out(i, c) += norm * wh[c];
    }
  return out;
}

/// Single-head attention: e_ij = leaky(a^T [W h_i ; W h_j]), softmax over
/// the closed neighbourhood, out_i = sum_j alpha_ij W h_j.
inline Matrix oracle_gat(const Matrix& h, const Follows& f, const Matrix& w, const std::vector<double>& a,
                         double slope, std::vector<std::vector<double>>* alphas = nullptr) {
  const std::size_t n = h.rows(), d = w.rows();
  const auto s = oracle_homogeneous(n, f);
  std::vector<std::vector<double>> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = oracle_apply(w, row_of(h, i));
  Matrix out(n, d);
  if (alphas) alphas->assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e;
    for (auto j : s[i]) {
      double v = 0.0;
      for (std::size_t c = 0; c < d; ++c) v += a[c] * z[i][c] + a[d + c] * z[j][c];
      e.push_back(v >= 0.0 ? v : slope * v);
    }
    double denom = 0.0;
    for (double v : e) denom += std::exp(v);
    std::size_t k = 0;
    for (auto j : s[i]) {
      const double alpha = std::exp(e[k++]) / denom;
      if (alphas) (*alphas)[i].push_back(alpha);
      for (std::size_t c = 0; c < d; ++c) out(i, c) += alpha * z[j][c];
    }
  }
  return out;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("botdetect_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace botdetect::testing

#endif  // BOTDETECT_TESTS_TEST_SUPPORT_HPP
