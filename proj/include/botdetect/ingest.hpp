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
#ifndef BOTDETECT_INGEST_HPP
#define BOTDETECT_INGEST_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "botdetect/hetero_graph.hpp"
#include "botdetect/matrix.hpp"

namespace botdetect::ingest {

inline constexpr std::size_t kNumNumerical = 6;
inline constexpr std::size_t kNumCategorical = 11;
inline constexpr std::size_t kCategoricalWidth = 2 * kNumCategorical;

inline constexpr std::array<std::string_view, kNumNumerical> kNumericalFields{
    "followers_count", "followings_count", "favorites_count",
    "statuses_count",  "active_days",      "screen_name_length"};

inline constexpr std::array<std::string_view, kNumCategorical> kCategoricalFields{
    "protected",
    "geo_enabled",
    "verified",
    "contributors_enabled",
    "is_translator",
    "is_translation_enabled",
    "profile_background_tile",
    "profile_user_background_image",
    "has_extended_profile",
    "default_profile",
    "default_profile_image"};

enum class Split : std::uint8_t { kTrain = 0, kVal = 1, kTest = 2, kUnlabeled = 3 };

inline constexpr int kHuman = 0;
inline constexpr int kBot = 1;
inline constexpr int kNoLabel = -1;

struct UserRecord {
  std::string user_id;
  std::array<std::optional<double>, kNumNumerical> numerical;
  std::array<std::optional<bool>, kNumCategorical> categorical;
  std::optional<int> label;
  Split split = Split::kUnlabeled;
  std::optional<std::string> description;
};

/// One byte per node (0/1) so masks can be viewed as spans.
using Mask = std::vector<std::uint8_t>;

struct SplitMasks {
  Mask train, val, test;

  const Mask& of(Split s) const;
  static std::size_t count(const Mask& m);
};

struct NumericStats {
  std::array<double, kNumNumerical> mean{};
  std::array<double, kNumNumerical> stddev{};
};

struct EmbeddingMatrix {
  std::size_t count = 0;
  std::size_t dim = 0;
  Matrix data;  // count x dim
};

struct EdgeRecord {
  std::string source;
  std::string target;
  std::optional<Relation> relation;
};

struct UserText {
  std::string description;
  std::vector<std::string> tweets;
};

/// Zero-variance guard for z-scoring.
inline constexpr double kStdEpsilon = 1e-8;

std::vector<UserRecord> parse_users(const std::filesystem::path& path);
std::vector<UserRecord> parse_users(std::istream& in, const std::string& source = "<users>");

SplitMasks make_masks(const std::vector<UserRecord>& records);
/// Per-node label with kNoLabel for unlabeled users.
std::vector<int> labels_of(const std::vector<UserRecord>& records);
std::unordered_map<std::string, std::uint32_t> index_users(const std::vector<UserRecord>& records);

NumericStats compute_numeric_stats(const std::vector<UserRecord>& records, const SplitMasks& masks);
Matrix encode_numerical(const std::vector<UserRecord>& records, const NumericStats& stats);
Matrix encode_categorical(const std::vector<UserRecord>& records);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, std::size_t expected_count);
void save_embeddings(const std::filesystem::path& path, const Matrix& rows);

std::vector<EdgeRecord> parse_edges(const std::filesystem::path& path);
std::vector<EdgeRecord> parse_edges(std::istream& in, const std::string& source = "<edges>");
HeteroGraph build_graph(const std::vector<EdgeRecord>& edges,
                        const std::unordered_map<std::string, std::uint32_t>& id_index);

/// Reads `{"id": ..., "description": ..., "tweets": [...]}` lines.
std::unordered_map<std::string, UserText> parse_texts(const std::filesystem::path& path);

/// Feature-hashed bag of lowercased whitespace tokens, L2-normalised.
/// Text without tokens maps to the zero vector.
std::vector<Scalar> hash_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

}  // namespace botdetect::ingest

#endif  // BOTDETECT_INGEST_HPP
