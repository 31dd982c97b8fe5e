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
#ifndef BOTDETECT_GRADCHECK_HPP
#define BOTDETECT_GRADCHECK_HPP

#include <functional>
#include <span>
#include <vector>

#include "botdetect/tape.hpp"

namespace botdetect::ad {

/// Builds a 1x1 scalar on `tape` from the given parameter handles.
using ScalarFn = std::function<Var(Tape& tape, std::span<const Var> params)>;

/// Compares tape gradients of `f` at `params` against central differences
/// (f(w + eps) - f(w - eps)) / 2 eps, one coordinate at a time.
///
/// Returns the largest |analytic - numeric| / max(1, |analytic|, |numeric|)
/// over all coordinates. Throws NumericalError when f is not finite.
double grad_check(const ScalarFn& f, const std::vector<Matrix>& params, double eps = 1e-5);

}  // namespace botdetect::ad

#endif  // BOTDETECT_GRADCHECK_HPP
