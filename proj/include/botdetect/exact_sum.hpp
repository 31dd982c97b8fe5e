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
#ifndef BOTDETECT_EXACT_SUM_HPP
#define BOTDETECT_EXACT_SUM_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace botdetect {

/// Correctly rounded floating-point accumulator (Shewchuk partials).
///
/// The result is the exact sum of all added terms rounded once, so it does
/// not depend on the order in which terms are added. Neighbourhood reductions
/// use it to make node relabelling bit-exact. Requires finite inputs and
/// strict IEEE evaluation (no FMA contraction, no fast-math).
class ExactSum {
 public:
  void add(double x) {
    std::size_t i = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      double y = partials_[k];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[i++] = lo;
      x = hi;
    }
    partials_[i] = x;
    n_ = i + 1;
  }

  double value() const {
    std::size_t n = n_;
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    // Round-half-even correction when the remaining partials push the
    // discarded tail past the halfway point.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      const double yr = x - hi;
      if (y == yr) hi = x;
    }
    return hi;
  }

  void reset() { n_ = 0; }

 private:
  // Non-overlapping partials of a double sum never exceed ~40 entries.
  std::array<double, 64> partials_{};
  std::size_t n_ = 0;
};

}  // namespace botdetect

#endif  // BOTDETECT_EXACT_SUM_HPP
