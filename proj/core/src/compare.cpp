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

#include "circex/compare.hpp"

#include "circex/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace circex {

ComparisonFrame make_frame(std::vector<IndicatorSeries> const &series, std::string const &dataset,
                           std::string const              &reference_country,
                           std::vector<std::string> const &countries)
{
  std::vector<IndicatorSeries const *> selected;
  for (auto const &s : series)
  {
    if (s.dataset != dataset)
    {
      continue;
    }
    bool const wanted = countries.empty() ||
                        std::find(countries.begin(), countries.end(), s.country) != countries.end() ||
                        s.country == reference_country;
    if (wanted)
    {
      selected.push_back(&s);
    }
  }
  auto const has_reference = std::any_of(selected.begin(), selected.end(), [&](auto const *s) {
    return s->country == reference_country;
  });
  if (!has_reference)
  {
    throw Error(ErrorCode::configuration,
                "dataset " + dataset + " has no series for reference country " + reference_country);
  }
  for (auto const *s : selected)
  {
    if (s->unit != selected.front()->unit)
    {
      throw Error(ErrorCode::schema, "dataset " + dataset + " mixes units");
    }
  }

  std::optional<int> year;
  for (auto const &point : selected.front()->points)
  {
    bool const everywhere = std::all_of(selected.begin(), selected.end(), [&](auto const *s) {
      return s->value_at(point.year).has_value();
    });
    if (everywhere)
    {
      year = point.year;
    }
  }
  if (!year)
  {
    throw Error(ErrorCode::configuration, "dataset " + dataset + ": no year common to all countries");
  }

  ComparisonFrame frame;
  frame.dataset           = dataset;
  frame.year              = *year;
  frame.unit              = selected.front()->unit;
  frame.reference_country = reference_country;
  for (auto const *s : selected)
  {
    frame.entries.push_back({s->country, *s->value_at(*year)});
  }
  std::sort(frame.entries.begin(), frame.entries.end(),
            [](auto const &a, auto const &b) { return a.country < b.country; });
  return frame;
}

double RatioMatrix::at(std::string const &numerator, std::string const &denominator) const
{
  auto const index = [&](std::string const &c) {
    auto const it = std::find(countries.begin(), countries.end(), c);
    if (it == countries.end())
    {
      throw Error(ErrorCode::configuration, "country " + c + " not in ratio matrix");
    }
    return static_cast<std::size_t>(it - countries.begin());
  };
  return ratio[index(numerator)][index(denominator)];
}

RatioMatrix ratio_matrix(ComparisonFrame const &frame)
{
  RatioMatrix m;
  for (auto const &entry : frame.entries)
  {
    if (!(entry.value > 0.0) || !std::isfinite(entry.value))
    {
      throw Error(ErrorCode::domain, "country " + entry.country + " has non-positive value in " +
                                         frame.dataset);
    }
    m.countries.push_back(entry.country);
  }
  std::size_t const n = frame.entries.size();
  m.ratio.assign(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < n; ++j)
    {
      if (i != j)
      {
        m.ratio[i][j] = frame.entries[i].value / frame.entries[j].value;
      }
    }
  }
  return m;
}

PairwiseRatio pairwise_ratio(IndicatorSeries const &numerator, IndicatorSeries const &denominator)
{
  if (numerator.unit != denominator.unit)
  {
    throw Error(ErrorCode::schema, "ratio of series with different units");
  }
  for (auto it = numerator.points.rbegin(); it != numerator.points.rend(); ++it)
  {
    if (auto const other = denominator.value_at(it->year))
    {
      if (!(*other > 0.0))
      {
        throw Error(ErrorCode::domain, "country " + denominator.country + " has zero value in " +
                                           denominator.dataset);
      }
      return {it->year, it->value / *other};
    }
  }
  throw Error(ErrorCode::configuration, numerator.country + " and " + denominator.country +
                                            " share no year in " + numerator.dataset);
}

LaggardReport laggard_report(std::vector<ComparisonFrame> const     &frames,
                             std::map<std::string, Direction> const &directions,
                             std::vector<std::string> const         &countries)
{
  struct Accumulated
  {
    double      rank_sum = 0.0;
    std::size_t count    = 0;
  };
  std::map<std::string, Accumulated> totals;

  LaggardReport report;
  for (auto const &frame : frames)
  {
    auto const dir = directions.find(frame.dataset);
    if (dir == directions.end())
    {
      throw Error(ErrorCode::configuration, "no direction declared for dataset " + frame.dataset);
    }

    DatasetRanking ranking;
    ranking.dataset   = frame.dataset;
    ranking.direction = dir->second;
    for (auto const &entry : frame.entries)
    {
      ranking.ranking.push_back({entry.country, entry.value, 0});
    }
    bool const higher_better = dir->second == Direction::higher_is_better;
    std::sort(ranking.ranking.begin(), ranking.ranking.end(), [&](auto const &a, auto const &b) {
      if (a.value != b.value)
      {
        return higher_better ? a.value > b.value : a.value < b.value;
      }
      return a.country < b.country;
    });
    for (std::size_t i = 0; i < ranking.ranking.size(); ++i)
    {
      bool const tied = i > 0 && ranking.ranking[i].value == ranking.ranking[i - 1].value;
      ranking.ranking[i].rank = tied ? ranking.ranking[i - 1].rank : static_cast<int>(i + 1);
      Accumulated &acc = totals[ranking.ranking[i].country];
      acc.rank_sum += ranking.ranking[i].rank;
      ++acc.count;
    }
    for (auto const &country : countries)
    {
      bool const present = std::any_of(frame.entries.begin(), frame.entries.end(),
                                       [&](auto const &e) { return e.country == country; });
      if (!present)
      {
        ranking.absent.push_back(country);
      }
    }
    std::sort(ranking.absent.begin(), ranking.absent.end());
    report.datasets.push_back(std::move(ranking));
  }

  for (auto const &[country, acc] : totals)
  {
    report.composite.push_back({country, acc.rank_sum / static_cast<double>(acc.count), acc.count, 0});
  }
  std::sort(report.composite.begin(), report.composite.end(), [](auto const &a, auto const &b) {
    return a.mean_rank != b.mean_rank ? a.mean_rank < b.mean_rank : a.country < b.country;
  });
  for (std::size_t i = 0; i < report.composite.size(); ++i)
  {
    bool const tied = i > 0 && report.composite[i].mean_rank == report.composite[i - 1].mean_rank;
    report.composite[i].position = tied ? report.composite[i - 1].position : static_cast<int>(i + 1);
  }
  return report;
}

TrendSummary trend_summary(IndicatorSeries const &series)
{
  if (series.points.size() < 2)
  {
    throw Error(ErrorCode::insufficient_data, "trend needs at least two points");
  }
  auto const &first = series.points.front();
  auto const &last  = series.points.back();

  TrendSummary t;
  t.start_year      = first.year;
  t.start           = first.value;
  t.end_year        = last.year;
  t.end             = last.value;
  t.absolute_change = last.value - first.value;
  if (first.value != 0.0)
  {
    t.relative_change = t.absolute_change / first.value;
  }
  bool non_decreasing = true;
  bool non_increasing = true;
  for (std::size_t i = 1; i < series.points.size(); ++i)
  {
    non_decreasing = non_decreasing && series.points[i].value >= series.points[i - 1].value;
    non_increasing = non_increasing && series.points[i].value <= series.points[i - 1].value;
  }
  t.monotone = non_decreasing || non_increasing;
  return t;
}

}  // namespace circex
