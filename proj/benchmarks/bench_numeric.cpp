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

#include "circex/numeric.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

void BM_ExactSum(benchmark::State &state)
{
  std::mt19937_64                        rng(9);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  std::vector<double>                    values(static_cast<std::size_t>(state.range(0)));
  for (auto &v : values)
  {
    v = dist(rng);
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(circex::exact_sum(values));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactSum)->RangeMultiplier(16)->Range(16, 1 << 16);

void BM_ParseDecimal(benchmark::State &state)
{
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(circex::parse_decimal("10994,849"));
  }
}
BENCHMARK(BM_ParseDecimal);

}  // namespace
