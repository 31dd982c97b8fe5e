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
// OpenMP kernels against their serial references on a random graph.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "botdetect/kernels.hpp"

using namespace botdetect;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = u(rng);
  return m;
}

Csr random_graph(std::size_t n, std::size_t degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> lists(n);
  for (auto& l : lists)
    for (std::size_t k = 0; k < degree; ++k) l.push_back(static_cast<std::uint32_t>(rng() % n));
  return Csr::from_lists(std::move(lists));
}

template <bool Parallel>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, 128, 1), b = random_matrix(128, 128, 2);
  Matrix c(n, 128);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::gemm_nt(a, b, c); else kernels::ref::gemm_nt(a, b, c);
    benchmark::DoNotOptimize(c.values().data());
  }
}

template <bool Parallel>
void BM_CsrMean(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Csr g = random_graph(n, 10, 3);
  const Matrix x = random_matrix(n, 128, 4);
  Matrix out(n, 128);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::csr_mean(g, x, out); else kernels::ref::csr_mean(g, x, out);
    benchmark::DoNotOptimize(out.values().data());
  }
}

template <bool Parallel>
void BM_GatForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Csr g = random_graph(n, 10, 5);
  const Matrix z = random_matrix(n, 128, 6), a = random_matrix(1, 256, 7);
  Matrix out(n, 128);
  kernels::GatCache cache;
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::gat_forward(g, z, a.values(), 0.2, out, cache);
    else
      kernels::ref::gat_forward(g, z, a.values(), 0.2, out, cache);
    benchmark::DoNotOptimize(out.values().data());
  }
}

}  // namespace

BENCHMARK(BM_Gemm<false>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Gemm<true>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_CsrMean<false>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_CsrMean<true>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_GatForward<false>)->Arg(1000)->Arg(10000);
BENCHMARK(BM_GatForward<true>)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
