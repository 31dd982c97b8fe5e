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
#include "botdetect/metrics.hpp"

#include <cmath>
#include <string>

namespace botdetect::train {

Metrics metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
  Metrics m;
  m.tp = tp;
  m.tn = tn;
  m.fp = fp;
  m.fn = fn;
  const double t = static_cast<double>(m.total());
  m.accuracy = t > 0 ? static_cast<double>(tp + tn) / t : 0.0;
  // 2PR/(P+R) simplifies to 2tp/(2tp+fp+fn).
  const std::size_t f1_den = 2 * tp + fp + fn;
  m.f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(f1_den);
  const double a = static_cast<double>(tp + fp), b = static_cast<double>(tp + fn);
  const double c = static_cast<double>(tn + fp), d = static_cast<double>(tn + fn);
  if (a == 0 || b == 0 || c == 0 || d == 0) {
    m.mcc = 0.0;
  } else {
    const double num = static_cast<double>(tp) * static_cast<double>(tn) - static_cast<double>(fp) * static_cast<double>(fn);
    m.mcc = num / std::sqrt(a * b * c * d);
  }
  return m;
}

std::vector<int> predict_classes(const Matrix& probs) {
  if (probs.cols() != 2) throw ShapeError("predict_classes: expected two columns");
  std::vector<int> out(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) out[i] = probs(i, 1) > probs(i, 0) ? 1 : 0;
  return out;
}

Metrics evaluate(const Matrix& probs, std::span<const int> labels, std::span<const std::uint8_t> mask) {
  if (labels.size() != probs.rows() || mask.size() != probs.rows()) throw ShapeError("evaluate: length mismatch");
  const auto pred = predict_classes(probs);
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i]) continue;
    if (labels[i] != 0 && labels[i] != 1)
      throw DataError(DataErrorKind::kMalformed, "evaluate: node " + std::to_string(i) + " is masked but unlabeled");
    if (labels[i] == 1) (pred[i] == 1 ? tp : fn)++;
    else (pred[i] == 1 ? fp : tn)++;
  }
  if (tp + tn + fp + fn == 0) throw DataError(DataErrorKind::kEmptyMask, "evaluate: empty mask");
  return metrics_from_counts(tp, tn, fp, fn);
}

}  // namespace botdetect::train
