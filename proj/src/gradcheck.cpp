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
#include "botdetect/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace botdetect::ad {
namespace {

double evaluate(const ScalarFn& f, const std::vector<Matrix>& params) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (const auto& p : params) vars.push_back(tape.parameter(p));
  const Var out = f(tape, vars);
  if (out.rows() != 1 || out.cols() != 1) throw ShapeError("grad_check: function must return a 1x1 scalar");
  const double v = out.value()(0, 0);
  if (!std::isfinite(v)) throw NumericalError("grad_check: function value is not finite");
  return v;
}

}  // namespace

double grad_check(const ScalarFn& f, const std::vector<Matrix>& params, double eps) {
  std::vector<Matrix> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const auto& p : params) vars.push_back(tape.parameter(p));
    const Var out = f(tape, vars);
    if (!std::isfinite(out.value()(0, 0))) throw NumericalError("grad_check: function value is not finite");
    tape.backward(out);
    for (const Var& v : vars) analytic.push_back(v.grad());
  }

  std::vector<Matrix> probe = params;
  double worst = 0.0;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    for (std::size_t k = 0; k < probe[p].size(); ++k) {
      const double w = probe[p].data()[k];
      probe[p].data()[k] = w + eps;
      const double up = evaluate(f, probe);
      probe[p].data()[k] = w - eps;
      const double down = evaluate(f, probe);
      probe[p].data()[k] = w;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[p].data()[k];
      const double rel = std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

}  // namespace botdetect::ad
