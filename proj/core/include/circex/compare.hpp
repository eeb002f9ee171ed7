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

#pragma once

#include "circex/eurostat.hpp"
#include "circex/registry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace circex {

struct CountryValue
{
  std::string country;
  double      value = 0.0;
};

/// One dataset, one year, several countries in a common unit.
struct ComparisonFrame
{
  std::string               dataset;
  int                       year = 0;
  IndicatorUnit             unit = IndicatorUnit::kg_per_capita;
  std::string               reference_country;
  std::vector<CountryValue> entries;
};

/// Builds a frame at the latest year for which every requested country has
/// a value. An empty `countries` list selects every series of the dataset.
/// Throws configuration error when the reference country or a common year
/// is missing and schema error on mixed units.
ComparisonFrame make_frame(std::vector<IndicatorSeries> const &series, std::string const &dataset,
                           std::string const              &reference_country,
                           std::vector<std::string> const &countries);

struct RatioMatrix
{
  std::vector<std::string>         countries;
  std::vector<std::vector<double>> ratio;  // ratio[i][j] = value_i / value_j

  double at(std::string const &numerator, std::string const &denominator) const;
};

/// Throws domain error naming the first country with a non-positive value.
RatioMatrix ratio_matrix(ComparisonFrame const &frame);

struct PairwiseRatio
{
  int    year  = 0;
  double ratio = 0.0;
};

/// numerator / denominator at the latest year both series cover.
PairwiseRatio pairwise_ratio(IndicatorSeries const &numerator, IndicatorSeries const &denominator);

struct RankEntry
{
  std::string country;
  double      value = 0.0;
  int         rank  = 0;  // competition ranking, 1 = best
};

struct DatasetRanking
{
  std::string              dataset;
  Direction                direction = Direction::higher_is_worse;
  std::vector<RankEntry>   ranking;  // best first, ties ordered by country code
  std::vector<std::string> absent;   // requested but missing from the frame
};

struct CompositeEntry
{
  std::string country;
  double      mean_rank = 0.0;
  std::size_t datasets  = 0;
  int         position  = 0;
};

struct LaggardReport
{
  std::vector<DatasetRanking> datasets;
  std::vector<CompositeEntry> composite;  // best first; mean rank, then country code
};

/// Ranks every frame by its declared direction and averages ranks across
/// frames. `countries` lists everyone expected; a country missing from a
/// frame is reported absent there and that frame is excluded from its mean.
LaggardReport laggard_report(std::vector<ComparisonFrame> const       &frames,
                             std::map<std::string, Direction> const   &directions,
                             std::vector<std::string> const           &countries = {});

struct TrendSummary
{
  int                   start_year = 0;
  double                start      = 0.0;
  int                   end_year   = 0;
  double                end        = 0.0;
  double                absolute_change = 0.0;
  std::optional<double> relative_change;  // absent when start is zero
  bool                  monotone = false;  // non-strict, either direction
};

/// Throws insufficient_data for fewer than two points.
TrendSummary trend_summary(IndicatorSeries const &series);

}  // namespace circex
