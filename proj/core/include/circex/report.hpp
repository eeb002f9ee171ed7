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

#include "circex/compare.hpp"
#include "circex/eurostat.hpp"
#include "circex/registry.hpp"
#include "circex/spc_model.hpp"
#include "circex/stats.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace circex {

std::string_view tool_version() noexcept;

enum class OutputFormat
{
  json,
  csv,
};

/// Which pipeline stages run_analysis executes.
struct Stages
{
  bool validate = true;
  bool model    = true;
  bool stats    = true;
  bool compare  = true;
};

struct RunConfig
{
  std::optional<std::filesystem::path> registry;
  std::optional<std::filesystem::path> capacity;
  std::optional<std::filesystem::path> demand;
  std::optional<std::filesystem::path> ledger;
  std::optional<std::filesystem::path> indicators;
  std::optional<std::filesystem::path> series;  // stats input instead of the SPC column
  std::string                          series_x = "year";
  std::string                          series_y = "spc_magnitude";
  std::optional<std::filesystem::path> output_dir;
  OutputFormat                         format = OutputFormat::json;

  double                         confidence = 0.95;
  std::vector<CorrelationMethod> methods{CorrelationMethod::pearson, CorrelationMethod::kendall,
                                         CorrelationMethod::spearman};
  bool signed_values = false;  // stats on raw SPC instead of |SPC|
  bool index_axis    = false;  // 1..n instead of calendar years

  std::optional<double> conversion_rate;
  bool                  dimensionless      = false;
  double                balance_tolerance  = 1e-6;
  std::string           monetary_unit      = "EUR";
  bool                  allow_negative_ledger = false;

  std::vector<std::string>         datasets;
  std::string                      reference_country = "BG";
  std::vector<std::string>         countries;
  std::map<std::string, Direction> directions;  // overrides for datasets outside the catalog
  bool                             fetch = false;
  EndpointConfig                   endpoint;
  YearRange                        years;

  /// Published values to compare against, e.g. "spc.mean" -> 68005.7.
  std::map<std::string, double> reference_values;
  double                        reference_tolerance = 1e-4;

  Stages stages;
};

/// Reads `key = value` lines ('#' starts a comment). Duplicate keys keep
/// the last value.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies settings onto `config`. Relative paths resolve against
/// `base_dir`. Throws configuration error on unknown keys or bad values.
void apply_settings(std::map<std::string, std::string> const &settings, RunConfig &config,
                    std::filesystem::path const &base_dir = {});

RunConfig load_config_file(std::filesystem::path const &path);

struct InputDigest
{
  std::string role;
  std::string path;
  std::string sha256;
};

struct ReferenceCheck
{
  std::string quantity;
  double      reference = 0.0;
  double      computed  = 0.0;
  bool        matched   = false;
};

struct DiscrepancyNote
{
  std::string quantity;
  double      reference = 0.0;
  double      computed  = 0.0;
  std::string note;
};

struct SeriesTrend
{
  std::string  dataset;
  std::string  country;
  TrendSummary trend;
};

struct ComparisonOutput
{
  std::vector<ComparisonFrame> frames;
  std::vector<RatioMatrix>     matrices;
  LaggardReport                laggards;
  std::vector<SeriesTrend>     trends;
  std::vector<IndicatorSeries> series;  // as ingested, for plot data
};

struct StatsOutput
{
  PairedSeries                   series;
  std::string                    y_unit;
  std::optional<DescriptiveSummary> summary;
  std::vector<CorrelationReport> correlations;
};

struct AnalysisReport
{
  std::string              version;
  std::vector<InputDigest> inputs;

  std::vector<TotalsDelta> validation;
  bool                     validation_passed = true;

  std::vector<SpcInputs>           spc_inputs;
  std::vector<SpcResult>           spc;
  std::vector<TrcResult>           trc;
  std::vector<BalanceReport>       balance;
  std::optional<PeriodAverages>    period;
  std::optional<UtilizationRatios> utilization;

  std::optional<StatsOutput>      stats;
  std::optional<ComparisonOutput> comparison;

  std::vector<ReferenceCheck>  reference_checks;
  std::vector<DiscrepancyNote> discrepancies;
  std::vector<std::string>     notes;
  std::optional<std::string>   error;
};

namespace exit_code {
inline constexpr int success            = 0;
inline constexpr int validation_failure = 1;
inline constexpr int configuration      = 2;
}  // namespace exit_code

struct RunOutcome
{
  AnalysisReport report;
  int            exit_code = exit_code::success;
};

/// Runs the configured stages. Never throws for input problems: missing or
/// unreadable inputs, bad configuration and fetch failures give exit 2;
/// totals mismatches, malformed data and undefined statistics give exit 1.
RunOutcome run_analysis(RunConfig const &config);

/// Deterministic JSON; derived values are rounded to six decimals, ingested
/// values are echoed as parsed.
std::string to_json(AnalysisReport const &report);

/// Per-year model table (year, tonnage, baselines, SPC variants and, when a
/// ledger was given, TrC and balance columns).
std::string to_csv(AnalysisReport const &report);

/// Writes tab-separated plot files: one two-column file per series and one
/// country-column file per comparison dataset. Returns the written paths in
/// a stable order.
std::vector<std::filesystem::path> emit_plot_series(AnalysisReport const        &report,
                                                    std::filesystem::path const &out_dir);

}  // namespace circex
