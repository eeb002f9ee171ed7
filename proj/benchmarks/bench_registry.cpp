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

#include "circex/registry.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

std::string synthetic_registry(int years, int organizations)
{
  std::string text =
      "year,organization,released_tons,regenerated_tons,processor,route_tons,route_kind\n";
  for (int y = 0; y < years; ++y)
  {
    std::string const year = std::to_string(2000 + y);
    for (int o = 0; o < organizations; ++o)
    {
      text += year + ",org " + std::to_string(o) + ",100.5,40.25,plant,40.25,regeneration\n";
    }
    text += year + ",TOTAL," + std::to_string(100.5 * organizations) + "," +
            std::to_string(40.25 * organizations) + ",,,\n";
  }
  return text;
}

void BM_ParseRegistry(benchmark::State &state)
{
  auto const text = synthetic_registry(10, static_cast<int>(state.range(0)));
  for (auto _ : state)
  {
    auto years = circex::parse_registry(text);
    benchmark::DoNotOptimize(years.data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseRegistry)->RangeMultiplier(10)->Range(10, 1000);

}  // namespace
