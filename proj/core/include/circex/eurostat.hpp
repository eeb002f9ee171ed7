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

#include "circex/registry.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace circex {

enum class Direction
{
  higher_is_better,  // recycling, energy recovery, resource productivity
  higher_is_worse,   // generation, disposal
};

/// A dataset the client knows how to request: the Eurostat table code plus
/// the dimension filters that reduce it to one value per (country, year).
struct DatasetSpec
{
  std::string                        id;        // key used in IndicatorSeries::dataset
  std::string                        table;     // Eurostat table code
  std::string                        title;
  IndicatorUnit                      unit = IndicatorUnit::kg_per_capita;
  Direction                          direction = Direction::higher_is_worse;
  std::map<std::string, std::string> filters;
};

/// Built-in catalog: env_wasgen (generation), env_wastrt (disposal),
/// env_wastrt.energy_recovery, env_wastrt.recycling, env_ac_rp
/// (resource productivity).
std::vector<DatasetSpec> const &dataset_catalog();

/// Throws configuration error for an id outside the catalog.
DatasetSpec const &find_dataset(std::string_view id);

struct EndpointConfig
{
  std::string           base_url = "https://ec.europa.eu";
  std::string           path     = "/eurostat/api/dissemination/statistics/1.0/data/";
  std::filesystem::path cache_dir;
  bool                  offline         = false;
  int                   retries         = 2;
  int                   timeout_seconds = 30;
  /// Per-dataset filter overrides: dataset id -> (dimension -> code).
  std::map<std::string, std::map<std::string, std::string>> filter_overrides;
};

struct YearRange
{
  int first = 2000;
  int last  = 2100;
};

/// Request path with a canonical (sorted) query string; doubles as the
/// cache key.
std::string build_query(DatasetSpec const &spec, std::vector<std::string> const &countries,
                        YearRange years, EndpointConfig const &config);

std::filesystem::path cache_path(EndpointConfig const &config, std::string_view dataset_id,
                                 std::string_view query);

/// Converts a JSON-stat 2.0 response into series. Every dimension other
/// than geo and time must be filtered to a single category.
std::vector<IndicatorSeries> parse_jsonstat(DatasetSpec const &spec, std::string_view payload);

/// Downloads (or, offline, reads from cache) one dataset for the given
/// countries. Successful downloads are written to the cache verbatim, so a
/// later offline run reproduces the same series.
///
/// Throws configuration error for an unknown dataset, fetch error
/// (retryable) on network failure and fetch error (not retryable) when
/// offline without a cached payload.
std::vector<IndicatorSeries> fetch_indicator(std::string_view dataset_id,
                                             std::vector<std::string> const &countries,
                                             YearRange years, EndpointConfig const &config);

/// Country code aliases between the CLI ("EU27") and Eurostat ("EU27_2020").
std::string to_eurostat_geo(std::string_view country);
std::string from_eurostat_geo(std::string_view geo);

}  // namespace circex
