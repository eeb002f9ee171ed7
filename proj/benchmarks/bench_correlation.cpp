//------------------------------------------------------------------------------
//
//   Copyright 2026 The circex Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "circex/stats.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

std::vector<double> random_series(std::size_t n, unsigned seed)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1000.0);
  std::vector<double>                    v(n);
  for (auto &x : v)
  {
    x = dist(rng);
  }
  return v;
}

void BM_Kendall(benchmark::State &state)
{
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const x = random_series(n, 1);
  auto const y = random_series(n, 2);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(circex::kendall_tau(x, y).coefficient);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Kendall)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oNLogN);

void BM_Spearman(benchmark::State &state)
{
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const x = random_series(n, 3);
  auto const y = random_series(n, 4);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(circex::spearman_rho(x, y).coefficient);
  }
}
BENCHMARK(BM_Spearman)->RangeMultiplier(8)->Range(8, 1 << 15);

void BM_Pearson(benchmark::State &state)
{
  auto const n = static_cast<std::size_t>(state.range(0));
  auto const x = random_series(n, 5);
  auto const y = random_series(n, 6);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(circex::pearson(x, y).coefficient);
  }
}
BENCHMARK(BM_Pearson)->RangeMultiplier(8)->Range(8, 1 << 15);

}  // namespace
