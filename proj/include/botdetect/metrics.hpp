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
#ifndef BOTDETECT_METRICS_HPP
#define BOTDETECT_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "botdetect/matrix.hpp"

namespace botdetect::train {

/// Binary classification metrics with bot as the positive class.
struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
};

/// F1 is 0 when precision and recall are both 0; MCC is 0 when any margin
/// of the confusion matrix is empty.
Metrics metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn);

/// Argmax per row, ties going to class 0 (human).
std::vector<int> predict_classes(const Matrix& probs);

/// Scores the masked rows. Throws DataError if the mask is empty or selects
/// an unlabeled node.
Metrics evaluate(const Matrix& probs, std::span<const int> labels, std::span<const std::uint8_t> mask);

}  // namespace botdetect::train

#endif  // BOTDETECT_METRICS_HPP
