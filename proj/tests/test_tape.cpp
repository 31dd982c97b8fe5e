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

#include <cmath>
#include <limits>

#include "botdetect/gradcheck.hpp"
#include "botdetect/tape.hpp"
#include "test_support.hpp"

using namespace botdetect;
using ad::Tape;
using ad::Var;
using testing::random_matrix;

TEST_CASE("matmul examples") {
  Tape t;
  const Matrix b{{1, 2}, {3, 4}};
  CHECK(ad::matmul(t.constant(Matrix::identity(2)), t.constant(b)).value() == b);
  CHECK(ad::matmul(t.constant(b), t.constant(Matrix{{1}, {1}})).value() == (Matrix{{3}, {7}}));
  CHECK_THROWS_AS(ad::matmul(t.constant(b), t.constant(Matrix(3, 1))), ShapeError);
}

TEST_CASE("gradient of sum(AB) w.r.t. A holds the row sums of B") {
  testing::Rng rng(4);
  const Matrix a = random_matrix(rng, 3, 4), b = random_matrix(rng, 4, 5);
  Tape t;
  const Var va = t.parameter(a);
  t.backward(ad::sum(ad::matmul(va, t.constant(b))));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < 5; ++j) row_sum += b(k, j);
      CHECK(va.grad()(i, k) == doctest::Approx(row_sum).epsilon(1e-12));
    }
  const double err = ad::grad_check(
      [&](Tape& tp, std::span<const Var> p) { return ad::sum(ad::matmul(p[0], tp.constant(b))); }, {a});
  CHECK(err < 1e-8);
}

TEST_CASE("matmul is associative on random 4x4 triples") {
  testing::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Tape t;
    const Var a = t.constant(random_matrix(rng, 4, 4)), b = t.constant(random_matrix(rng, 4, 4)),
              c = t.constant(random_matrix(rng, 4, 4));
    CHECK(max_abs_diff(ad::matmul(ad::matmul(a, b), c).value(), ad::matmul(a, ad::matmul(b, c)).value()) < 1e-10);
  }
}

TEST_CASE("leaky relu branches and the kink convention") {
  Tape t;
  const Var x = t.parameter(Matrix{{2.0, -2.0, 0.0}});
  const Var y = ad::leaky_relu(x, 0.01);
  CHECK(y.value()(0, 0) == 2.0);
  CHECK(y.value()(0, 1) == doctest::Approx(-0.02).epsilon(1e-15));
  CHECK(y.value()(0, 2) == 0.0);
  t.backward(ad::sum(y));
  CHECK(x.grad() == (Matrix{{1.0, 0.01, 1.0}}));
}

TEST_CASE("sum of leaky_relu(W w) passes the checker") {
  testing::Rng rng(12);
  Matrix w = random_matrix(rng, 4, 3), v = random_matrix(rng, 3, 1);
  const double err = ad::grad_check(
      [](Tape&, std::span<const Var> p) { return ad::sum(ad::leaky_relu(ad::matmul(p[0], p[1]), 0.01)); }, {w, v});
  CHECK(err < 1e-6);
}

TEST_CASE("softmax rows") {
  Tape t;
  const Var s = ad::softmax_rows(t.constant(Matrix{{0.0, 0.0}, {std::log(2.0), 0.0}, {1000.0, 0.0}}));
  CHECK(s.value()(0, 0) == 0.5);
  CHECK(s.value()(0, 1) == 0.5);
  CHECK(s.value()(1, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(s.value()(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(s.value()(2, 0) == doctest::Approx(1.0));
  CHECK(s.value()(2, 1) < 1e-300);

  testing::Rng rng(13);
  const Var r = ad::softmax_rows(t.constant(random_matrix(rng, 20, 5, 10.0)));
  for (std::size_t i = 0; i < 20; ++i) {
    double total = 0.0;
    for (std::size_t c = 0; c < 5; ++c) {
      CHECK(r.value()(i, c) > 0.0);
      CHECK(r.value()(i, c) < 1.0);
      total += r.value()(i, c);
    }
    CHECK(std::abs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("concat cols") {
  Tape t;
  const Var a = t.parameter(Matrix{{1}, {2}}), b = t.parameter(Matrix{{3}, {4}});
  const std::vector<Var> parts{a, b};
  const Var c = ad::concat_cols(parts);
  CHECK(c.value() == (Matrix{{1, 3}, {2, 4}}));
  const std::vector<Var> one{a};
  CHECK(ad::concat_cols(one).value() == a.value());
  const std::vector<Var> four{a, b, a, b};
  CHECK(ad::concat_cols(four).cols() == 4);
  const std::vector<Var> ragged{a, t.constant(Matrix(3, 1))};
  CHECK_THROWS_AS(ad::concat_cols(ragged), ShapeError);
  t.backward(ad::sum_squares(c));
  CHECK(a.grad() == (Matrix{{2}, {4}}));
  CHECK(b.grad() == (Matrix{{6}, {8}}));
}

TEST_CASE("mean rows") {
  Tape t;
  CHECK(ad::mean_rows(t.constant(Matrix{{2, 0}, {0, 4}})).value() == (Matrix{{1, 2}}));
  CHECK(ad::mean_rows(t.constant(Matrix{{5, 6}})).value() == (Matrix{{5, 6}}));
  CHECK(ad::mean_rows(t.constant(Matrix(7, 2, 0.25))).value() == (Matrix{{0.25, 0.25}}));
}

TEST_CASE("grad check on a quadratic") {
  const double err = ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(p[0]); },
                                    {Matrix{{3.0}}});
  CHECK(err < 1e-8);
  Tape t;
  const Var w = t.parameter(Matrix{{3.0}});
  t.backward(ad::sum_squares(w));
  CHECK(w.grad()(0, 0) == 6.0);
}

TEST_CASE("shared parameters accumulate gradients") {
  Tape t;
  const Var w = t.parameter(Matrix{{1.5}});
  t.backward(ad::sum(ad::add(w, w)));
  CHECK(w.grad()(0, 0) == 2.0);
}

TEST_CASE("every differentiable op passes the checker at random points") {
  testing::Rng rng(21);
  for (int point = 0; point < 10; ++point) {
    // Keep leaky_relu inputs away from the kink.
    Matrix x = random_matrix(rng, 3, 4);
    for (auto& v : x.values())
      if (std::abs(v) < 1e-3) v = 0.5;
    const Matrix w = random_matrix(rng, 2, 4), bias = random_matrix(rng, 1, 2);
    const Matrix y = random_matrix(rng, 4, 2);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::matmul(p[0], p[1])); },
                         {x, y}) < 1e-4);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::matmul_nt(p[0], p[1])); },
                         {x, w}) < 1e-4);
    CHECK(ad::grad_check(
              [](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::linear(p[0], p[1], p[2])); },
              {x, w, bias}) < 1e-4);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::add_bias(p[0], p[1])); },
                         {y, bias}) < 1e-4);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::leaky_relu(p[0], 0.01)); },
                         {x}) < 1e-4);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::scale(p[0], -1.7)); },
                         {x}) < 1e-4);
    CHECK(ad::grad_check([&](Tape& t, std::span<const Var> p) {
            return ad::sum(ad::matmul(ad::softmax_rows(p[0]), t.constant(y)));
          },
                         {x}) < 1e-4);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) {
            const std::vector<Var> parts{p[0], p[1]};
            return ad::sum_squares(ad::concat_cols(parts));
          },
                         {x, random_matrix(rng, 3, 2)}) < 1e-4);
    CHECK(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(ad::mean_rows(p[0])); }, {x}) <
          1e-4);
  }
}

TEST_CASE("binary cross entropy") {
  const std::vector<int> labels{1, 0, 1, 0, -1};
  const std::vector<std::uint8_t> mask{1, 1, 1, 1, 0};
  Tape t;
  const Var half = t.constant(Matrix(5, 2, 0.5));
  CHECK(ad::binary_cross_entropy(half, labels, mask, ad::Reduction::kSum).value()(0, 0) ==
        doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(ad::binary_cross_entropy(half, labels, mask, ad::Reduction::kMean).value()(0, 0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Approaching the labels drives the loss to zero monotonically.
  double prev = std::numeric_limits<double>::infinity();
  for (double p : {0.6, 0.8, 0.95, 0.999}) {
    Matrix probs(5, 2);
    for (std::size_t i = 0; i < 5; ++i) {
      const double bot = labels[i] == 1 ? p : 1.0 - p;
      probs(i, 0) = 1.0 - bot;
      probs(i, 1) = bot;
    }
    const double l = ad::binary_cross_entropy(t.constant(probs), labels, mask, ad::Reduction::kMean).value()(0, 0);
    CHECK(l < prev);
    prev = l;
  }

  // Saturated probabilities are clamped instead of producing infinities.
  Matrix wrong(5, 2);
  for (std::size_t i = 0; i < 5; ++i) wrong(i, labels[i] == 1 ? 0 : 1) = 1.0;
  const double clamped = ad::binary_cross_entropy(t.constant(wrong), labels, mask, ad::Reduction::kSum).value()(0, 0);
  CHECK(clamped == doctest::Approx(-4.0 * std::log(1e-12)).epsilon(1e-12));

  const std::vector<std::uint8_t> none(5, 0);
  CHECK_THROWS_AS(ad::binary_cross_entropy(half, labels, none, ad::Reduction::kMean), DataError);
  const std::vector<std::uint8_t> unlabeled{0, 0, 0, 0, 1};
  CHECK_THROWS_AS(ad::binary_cross_entropy(half, labels, unlabeled, ad::Reduction::kMean), DataError);
}

TEST_CASE("non-finite forward values raise numerical errors") {
  Tape t;
  const Var big = t.constant(Matrix{{1e200}});
  CHECK_THROWS_AS(ad::matmul(big, big), NumericalError);
  CHECK_THROWS_AS(t.constant(Matrix{{std::numeric_limits<double>::quiet_NaN()}}), NumericalError);
  CHECK_THROWS_AS(ad::grad_check([](Tape&, std::span<const Var> p) { return ad::sum_squares(p[0]); }, {Matrix{{1e200}}}),
                  NumericalError);
}

TEST_CASE("backward needs a scalar root on the same tape") {
  Tape t, other;
  const Var x = t.parameter(Matrix(2, 2, 1.0));
  CHECK_THROWS_AS(t.backward(x), ShapeError);
  const Var y = other.parameter(Matrix{{1.0}});
  CHECK_THROWS_AS(t.backward(y), ShapeError);
  CHECK_THROWS_AS(ad::add(x, other.parameter(Matrix(2, 2))), ShapeError);
}

TEST_CASE("backward visits each node once in reverse creation order") {
  Tape t;
  std::vector<std::size_t> order;
  const Var a = t.parameter(Matrix{{1.0}});
  const Var b = t.record("probe_b", Matrix{{2.0}}, {a}, [&](Tape& tp, std::size_t self) {
    order.push_back(self);
    tp.grad(a.id())(0, 0) += tp.grad(self)(0, 0);
  });
  const Var c = t.record("probe_c", Matrix{{3.0}}, {b}, [&](Tape& tp, std::size_t self) {
    order.push_back(self);
    tp.grad(b.id())(0, 0) += tp.grad(self)(0, 0);
  });
  t.backward(c);
  CHECK(order == std::vector<std::size_t>{c.id(), b.id()});
  CHECK(a.grad()(0, 0) == 1.0);
}
