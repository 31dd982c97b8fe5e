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

#include <sstream>

#include "botdetect/binio.hpp"
#include "botdetect/ingest.hpp"
#include "test_support.hpp"

using namespace botdetect;
using namespace botdetect::ingest;
using testing::TempDir;

namespace {

std::vector<UserRecord> users(const std::string& text) {
  std::istringstream in(text);
  return parse_users(in, "users.jsonl");
}

DataErrorKind users_error(const std::string& text, std::string* message = nullptr) {
  try {
    users(text);
  } catch (const DataError& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("expected a data error");
  return DataErrorKind::kIo;
}

std::string counts_line(const std::string& id, double followers, const std::string& split) {
  std::ostringstream s;
  s << R"({"id":")" << id << R"(","followers_count":)" << followers
    << R"(,"followings_count":1,"favorites_count":1,"statuses_count":1,"active_days":1,"screen_name_length":1)"
    << R"(,"label":"human","split":")" << split << "\"}\n";
  return s.str();
}

}  // namespace

TEST_CASE("user lines map fields directly") {
  const auto r = users(R"({"id":"u1","followers_count":10,"verified":true,"label":"bot","split":"train"})");
  REQUIRE(r.size() == 1);
  CHECK(r[0].user_id == "u1");
  CHECK(r[0].numerical[0] == 10.0);
  CHECK(r[0].categorical[2] == true);
  CHECK(r[0].label == kBot);
  CHECK(r[0].split == Split::kTrain);
  CHECK_FALSE(r[0].numerical[2].has_value());
  CHECK_FALSE(r[0].categorical[0].has_value());
}

TEST_CASE("categorical fields follow the table order") {
  CHECK(kCategoricalFields[0] == "protected");
  CHECK(kCategoricalFields[2] == "verified");
  CHECK(kNumericalFields[2] == "favorites_count");
}

TEST_CASE("user parse errors carry file and line") {
  std::string msg;
  CHECK(users_error("{\"id\":\"u1\"}\n{\"id\":\"u1\"}\n", &msg) == DataErrorKind::kDuplicateId);
  CHECK(msg.find("users.jsonl:2") != std::string::npos);
  CHECK(users_error("{\"id\":\"u1\"}\n\n{oops\n", &msg) == DataErrorKind::kMalformed);
  CHECK(msg.find("users.jsonl:3") != std::string::npos);
  CHECK(users_error(R"({"id":"u1","verified":"yes"})") == DataErrorKind::kMalformed);
  CHECK(users_error(R"({"id":"u1","followers_count":-1})") == DataErrorKind::kMalformed);
  CHECK(users_error(R"({"id":"u1","followers_count":1.5})") == DataErrorKind::kMalformed);
  CHECK(users_error(R"({"id":"u1","label":"robot","split":"train"})") == DataErrorKind::kMalformed);
  CHECK(users_error(R"({"id":"u1","label":"bot"})") == DataErrorKind::kMalformed);
  CHECK(users_error(R"({"id":"u1","split":"val"})") == DataErrorKind::kMalformed);
  CHECK(users_error(R"({"followers_count":3})") == DataErrorKind::kMalformed);
  CHECK(users_error("[1,2]") == DataErrorKind::kMalformed);
}

TEST_CASE("null fields are absent") {
  const auto r = users(R"({"id":"u1","followers_count":null,"verified":null})");
  CHECK_FALSE(r[0].numerical[0].has_value());
  CHECK_FALSE(r[0].categorical[2].has_value());
  CHECK(r[0].split == Split::kUnlabeled);
}

TEST_CASE("numeric stats use train rows and population std") {
  const auto r = users(counts_line("a", 1, "train") + counts_line("b", 2, "train") + counts_line("c", 3, "train") +
                       counts_line("d", 100, "test") + R"({"id":"e"})" "\n");
  const auto masks = make_masks(r);
  const auto stats = compute_numeric_stats(r, masks);
  CHECK(stats.mean[0] == doctest::Approx(2.0));
  CHECK(stats.stddev[0] == doctest::Approx(0.816497).epsilon(1e-6));
  const Matrix x = encode_numerical(r, stats);
  CHECK(x(2, 0) == doctest::Approx(1.224745).epsilon(1e-6));
  // Absent values encode as zero.
  for (std::size_t k = 0; k < kNumNumerical; ++k) CHECK(x(4, k) == 0.0);
}

TEST_CASE("constant and single-value columns") {
  auto constant = users(counts_line("a", 5, "train") + counts_line("b", 5, "train") + counts_line("c", 5, "train"));
  auto stats = compute_numeric_stats(constant, make_masks(constant));
  CHECK(stats.mean[0] == 5.0);
  CHECK(stats.stddev[0] == 0.0);
  const Matrix x = encode_numerical(constant, stats);
  for (std::size_t i = 0; i < 3; ++i) CHECK(x(i, 0) == 0.0);

  auto single = users(counts_line("a", 7, "train") + R"({"id":"b","label":"bot","split":"train"})" "\n");
  stats = compute_numeric_stats(single, make_masks(single));
  CHECK(stats.mean[0] == 7.0);
  CHECK(stats.stddev[0] == 0.0);
}

TEST_CASE("a column with no train values is an error naming the column") {
  const auto r = users(R"({"id":"a","label":"bot","split":"train"})" "\n" R"({"id":"b","favorites_count":3})");
  try {
    compute_numeric_stats(r, make_masks(r));
    FAIL("expected missing column");
  } catch (const DataError& e) {
    CHECK(e.kind() == DataErrorKind::kMissingColumn);
    CHECK(std::string(e.what()).find("followers_count") != std::string::npos);
  }
}

TEST_CASE("z-scored train columns have zero mean and unit std") {
  testing::Rng rng(51);
  std::string text;
  for (int i = 0; i < 50; ++i) {
    std::ostringstream s;
    s << R"({"id":"u)" << i << '"';
    for (std::size_t k = 0; k < kNumNumerical; ++k)
      if (rng.coin(0.8)) s << ",\"" << kNumericalFields[k] << "\":" << rng.below(1000);
    s << R"(,"label":"bot","split":")" << (i % 3 == 0 ? "test" : "train") << "\"}\n";
    text += s.str();
  }
  const auto r = users(text);
  const auto masks = make_masks(r);
  const Matrix x = encode_numerical(r, compute_numeric_stats(r, masks));
  for (std::size_t k = 0; k < kNumNumerical; ++k) {
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (masks.train[i] && r[i].numerical[k]) {
        sum += x(i, k);
        sq += x(i, k) * x(i, k);
        ++n;
      }
    CHECK(std::abs(sum / static_cast<double>(n)) < 1e-6);
    CHECK(std::abs(std::sqrt(sq / static_cast<double>(n)) - 1.0) < 1e-6);
  }
  CHECK(encode_numerical(r, compute_numeric_stats(r, masks)) == x);
}

TEST_CASE("categorical one-hot blocks") {
  const auto r = users(R"({"id":"a","verified":true,"protected":false})" "\n" R"({"id":"b"})");
  const Matrix c = encode_categorical(r);
  CHECK(c.cols() == 22);
  CHECK(c(0, 4) == 1.0);
  CHECK(c(0, 5) == 0.0);
  CHECK(c(0, 0) == 0.0);
  CHECK(c(0, 1) == 1.0);
  for (std::size_t k = 0; k < 22; ++k) CHECK(c(1, k) == 0.0);
  for (std::size_t k = 0; k < 11; ++k) CHECK(c(0, 2 * k) + c(0, 2 * k + 1) <= 1.0);
}

TEST_CASE("masks and labels") {
  const auto r = users(counts_line("a", 1, "train") + counts_line("b", 1, "val") + counts_line("c", 1, "test") +
                       "{\"id\":\"d\"}\n");
  const auto m = make_masks(r);
  CHECK(m.train == Mask{1, 0, 0, 0});
  CHECK(m.val == Mask{0, 1, 0, 0});
  CHECK(m.test == Mask{0, 0, 1, 0});
  CHECK(labels_of(r) == std::vector<int>{0, 0, 0, kNoLabel});
  CHECK(index_users(r).at("c") == 2);
}

TEST_CASE("embedding files") {
  TempDir dir;
  const Matrix rows{{1, 2, 3}, {4, 5, 6}};
  save_embeddings(dir / "e.bre", rows);
  const std::string bytes = testing::read_file(dir / "e.bre");
  CHECK(bytes.size() == 12 + 24);
  CHECK(bytes.substr(0, 4) == "BRGE");
  const auto e = load_embeddings(dir / "e.bre", 2);
  CHECK(e.count == 2);
  CHECK(e.dim == 3);
  CHECK(e.data == rows);

  auto kind_of = [&](const std::string& content, std::size_t expected) {
    testing::write_file(dir / "x.bre", content);
    try {
      load_embeddings(dir / "x.bre", expected);
    } catch (const DataError& err) {
      return err.kind();
    }
    return DataErrorKind::kIo;
  };
  CHECK(kind_of(bytes.substr(0, bytes.size() - 4), 2) == DataErrorKind::kTruncated);
  CHECK(kind_of(bytes, 3) == DataErrorKind::kCountMismatch);
  CHECK(kind_of("XXXX" + bytes.substr(4), 2) == DataErrorKind::kBadMagic);
  try {
    load_embeddings(dir / "missing.bre", 1);
    FAIL("expected io error");
  } catch (const DataError& err) {
    CHECK(err.kind() == DataErrorKind::kIo);
  }
}

TEST_CASE("edge csv") {
  std::istringstream plain("source,target\na,b\nb,c\n");
  const auto e = parse_edges(plain, "edges.csv");
  REQUIRE(e.size() == 2);
  CHECK(e[0].source == "a");
  CHECK(e[1].target == "c");
  CHECK_FALSE(e[0].relation.has_value());

  std::istringstream typed("source,target,relation\na,b,follower\n");
  CHECK(parse_edges(typed, "edges.csv")[0].relation == Relation::kFollower);

  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_edges(in, "edges.csv");
    } catch (const DataError& err) {
      return std::string(err.what());
    }
    return std::string();
  };
  CHECK(error_of("from,to\na,b\n").find("header") != std::string::npos);
  CHECK(error_of("source,target\na,b,c\n").find("edges.csv:2") != std::string::npos);
  CHECK(error_of("source,target,relation\na,b,likes\n").find("relation") != std::string::npos);
  CHECK(error_of("").find("header") != std::string::npos);
}

TEST_CASE("text corpus") {
  TempDir dir;
  testing::write_file(dir / "t.jsonl", R"({"id":"a","description":"hello world","tweets":["x","y"]})" "\n"
                                       R"({"id":"b","tweets":[]})" "\n");
  const auto t = parse_texts(dir / "t.jsonl");
  CHECK(t.at("a").description == "hello world");
  CHECK(t.at("a").tweets.size() == 2);
  CHECK(t.at("b").tweets.empty());
  testing::write_file(dir / "bad.jsonl", R"({"id":"a","tweets":[1]})");
  CHECK_THROWS_AS(parse_texts(dir / "bad.jsonl"), DataError);
}

TEST_CASE("hashed text embedding") {
  const auto a = hash_embed("Hello hello World", 16, 3);
  CHECK(a == hash_embed("Hello hello World", 16, 3));
  CHECK(a == hash_embed("  hello   HELLO world ", 16, 3));
  double norm = 0.0;
  for (double v : a) norm += v * v;
  CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-6);
  for (double v : hash_embed("", 16, 3)) CHECK(v == 0.0);
  for (double v : hash_embed(" \t ", 16, 3)) CHECK(v == 0.0);
  CHECK(hash_embed("hello world", 16, 3) != hash_embed("hello world", 16, 4));
  CHECK(hash_embed("x", 5, 0).size() == 5);
}
