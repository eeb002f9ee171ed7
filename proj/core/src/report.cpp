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

#include "circex/report.hpp"

#include "circex/error.hpp"
#include "circex/numeric.hpp"
#include "csv.hpp"
#include "digest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <set>
#include <sstream>

#ifndef CIRCEX_VERSION
#define CIRCEX_VERSION "0.0.0"
#endif

namespace circex {

namespace fs = std::filesystem;
using ojson  = nlohmann::ordered_json;

std::string_view tool_version() noexcept
{
  return CIRCEX_VERSION;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string trim(std::string_view s)
{
  auto const blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front()))
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && blank(s.back()))
  {
    s.remove_suffix(1);
  }
  return std::string{s};
}

std::vector<std::string> split_list(std::string const &text)
{
  std::vector<std::string> items;
  std::stringstream        in(text);
  std::string              item;
  while (std::getline(in, item, ','))
  {
    item = trim(item);
    if (!item.empty())
    {
      items.push_back(item);
    }
  }
  return items;
}

bool parse_bool(std::string const &key, std::string const &value)
{
  if (value == "true" || value == "1" || value == "yes" || value == "on")
  {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off")
  {
    return false;
  }
  throw Error(ErrorCode::configuration, key + ": expected a boolean, got '" + value + "'");
}

double parse_real(std::string const &key, std::string const &value)
{
  // Accept scientific notation here; config values are not table cells.
  char        *end    = nullptr;
  double const result = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(result))
  {
    throw Error(ErrorCode::configuration, key + ": expected a number, got '" + value + "'");
  }
  return result;
}

int parse_int(std::string const &key, std::string const &value)
{
  double const v = parse_real(key, value);
  if (v != std::floor(v))
  {
    throw Error(ErrorCode::configuration, key + ": expected an integer, got '" + value + "'");
  }
  return static_cast<int>(v);
}

fs::path resolve(fs::path const &base_dir, std::string const &value)
{
  fs::path p{value};
  if (p.is_relative() && !base_dir.empty())
  {
    p = base_dir / p;
  }
  return p;
}

Direction parse_direction(std::string const &key, std::string const &value)
{
  if (value == "higher_is_better" || value == "good_high")
  {
    return Direction::higher_is_better;
  }
  if (value == "higher_is_worse" || value == "bad_high")
  {
    return Direction::higher_is_worse;
  }
  throw Error(ErrorCode::configuration, key + ": expected higher_is_better or higher_is_worse");
}

std::set<std::string> const &known_reference_quantities()
{
  static std::set<std::string> const known{
      "spc.mean",        "spc.variance",       "spc.std_dev",         "spc.pearson",
      "spc.kendall",     "spc.spearman",       "period.released",     "period.regenerated",
      "period.capacity", "period.demand",      "utilization.capacity", "utilization.demand"};
  return known;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text)
{
  std::map<std::string, std::string> settings;
  std::stringstream                  in{std::string{text}};
  std::string                        line;
  int                                number = 0;
  while (std::getline(in, line))
  {
    ++number;
    if (auto const hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    auto const eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw Error(ErrorCode::configuration,
                  "config line " + std::to_string(number) + ": expected key=value");
    }
    std::string key = trim(std::string_view{line}.substr(0, eq));
    if (key.empty())
    {
      throw Error(ErrorCode::configuration, "config line " + std::to_string(number) + ": empty key");
    }
    settings[key] = trim(std::string_view{line}.substr(eq + 1));
  }
  return settings;
}

void apply_settings(std::map<std::string, std::string> const &settings, RunConfig &config,
                    fs::path const &base_dir)
{
  for (auto const &[key, value] : settings)
  {
    if (key == "registry")
    {
      config.registry = resolve(base_dir, value);
    }
    else if (key == "capacity")
    {
      config.capacity = resolve(base_dir, value);
    }
    else if (key == "demand")
    {
      config.demand = resolve(base_dir, value);
    }
    else if (key == "ledger")
    {
      config.ledger = resolve(base_dir, value);
    }
    else if (key == "indicators")
    {
      config.indicators = resolve(base_dir, value);
    }
    else if (key == "series")
    {
      config.series = resolve(base_dir, value);
    }
    else if (key == "series.x")
    {
      config.series_x = value;
    }
    else if (key == "series.y")
    {
      config.series_y = value;
    }
    else if (key == "out_dir")
    {
      config.output_dir = resolve(base_dir, value);
    }
    else if (key == "format")
    {
      if (value != "json" && value != "csv")
      {
        throw Error(ErrorCode::configuration, "format: expected json or csv");
      }
      config.format = value == "json" ? OutputFormat::json : OutputFormat::csv;
    }
    else if (key == "confidence")
    {
      config.confidence = parse_real(key, value);
    }
    else if (key == "methods")
    {
      config.methods.clear();
      for (auto const &name : split_list(value))
      {
        auto const method = parse_correlation_method(name);
        if (!method)
        {
          throw Error(ErrorCode::configuration, "methods: unknown method '" + name + "'");
        }
        config.methods.push_back(*method);
      }
    }
    else if (key == "signed")
    {
      config.signed_values = parse_bool(key, value);
    }
    else if (key == "index_axis")
    {
      config.index_axis = parse_bool(key, value);
    }
    else if (key == "conversion_rate")
    {
      config.conversion_rate = parse_real(key, value);
    }
    else if (key == "dimensionless")
    {
      config.dimensionless = parse_bool(key, value);
    }
    else if (key == "balance_tolerance")
    {
      config.balance_tolerance = parse_real(key, value);
    }
    else if (key == "monetary_unit")
    {
      config.monetary_unit = value;
    }
    else if (key == "allow_negative_ledger")
    {
      config.allow_negative_ledger = parse_bool(key, value);
    }
    else if (key == "datasets")
    {
      config.datasets = split_list(value);
    }
    else if (key == "reference_country")
    {
      config.reference_country = value;
    }
    else if (key == "countries")
    {
      config.countries = split_list(value);
    }
    else if (key == "fetch")
    {
      config.fetch = parse_bool(key, value);
    }
    else if (key == "offline")
    {
      config.endpoint.offline = parse_bool(key, value);
    }
    else if (key == "cache_dir")
    {
      config.endpoint.cache_dir = resolve(base_dir, value);
    }
    else if (key == "endpoint")
    {
      config.endpoint.base_url = value;
    }
    else if (key == "endpoint.path")
    {
      config.endpoint.path = value;
    }
    else if (key == "retries")
    {
      config.endpoint.retries = parse_int(key, value);
    }
    else if (key == "timeout")
    {
      config.endpoint.timeout_seconds = parse_int(key, value);
    }
    else if (key == "year_first")
    {
      config.years.first = parse_int(key, value);
    }
    else if (key == "year_last")
    {
      config.years.last = parse_int(key, value);
    }
    else if (key == "reference_tolerance")
    {
      config.reference_tolerance = parse_real(key, value);
    }
    else if (key.rfind("reference.", 0) == 0)
    {
      std::string const quantity = key.substr(10);
      if (!known_reference_quantities().contains(quantity))
      {
        throw Error(ErrorCode::configuration, "unknown reference quantity '" + quantity + "'");
      }
      config.reference_values[quantity] = parse_real(key, value);
    }
    else if (key.rfind("direction.", 0) == 0)
    {
      config.directions[key.substr(10)] = parse_direction(key, value);
    }
    else if (key.rfind("filter.", 0) == 0)
    {
      // filter.<dataset>.<dimension> = code; dataset ids may contain dots.
      auto const last_dot = key.rfind('.');
      if (last_dot <= 7)
      {
        throw Error(ErrorCode::configuration, key + ": expected filter.<dataset>.<dimension>");
      }
      config.endpoint.filter_overrides[key.substr(7, last_dot - 7)][key.substr(last_dot + 1)] = value;
    }
    else
    {
      throw Error(ErrorCode::configuration, "unknown config key '" + key + "'");
    }
  }
}

RunConfig load_config_file(fs::path const &path)
{
  std::string text;
  try
  {
    text = detail::read_file(path);
  }
  catch (Error const &)
  {
    throw Error(ErrorCode::configuration, "cannot read config file '" + path.string() + "'");
  }
  RunConfig config;
  apply_settings(parse_key_values(text), config, path.parent_path());
  return config;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

std::string load_input(AnalysisReport &report, std::string const &role, fs::path const &path)
{
  std::string text;
  try
  {
    text = detail::read_file(path);
  }
  catch (Error const &)
  {
    throw Error(ErrorCode::configuration, "cannot read " + role + " input '" + path.string() + "'");
  }
  report.inputs.push_back({role, path.string(), detail::sha256_hex(text)});
  return text;
}

int classify(ErrorCode code) noexcept
{
  switch (code)
  {
  case ErrorCode::configuration:
  case ErrorCode::io:
  case ErrorCode::fetch:
    return exit_code::configuration;
  default:
    return exit_code::validation_failure;
  }
}

Direction direction_for(RunConfig const &config, std::string const &dataset)
{
  if (auto const it = config.directions.find(dataset); it != config.directions.end())
  {
    return it->second;
  }
  return find_dataset(dataset).direction;
}

ComparisonOutput run_compare(RunConfig const &config, std::string const &indicator_text)
{
  ComparisonOutput out;
  std::vector<IndicatorSeries> series;
  if (!indicator_text.empty())
  {
    series = parse_indicator_table(indicator_text);
  }

  std::vector<std::string> requested = config.countries;
  if (!config.reference_country.empty() &&
      std::find(requested.begin(), requested.end(), config.reference_country) == requested.end())
  {
    requested.insert(requested.begin(), config.reference_country);
  }

  if (config.fetch)
  {
    if (config.datasets.empty())
    {
      throw Error(ErrorCode::configuration, "fetching needs an explicit dataset list");
    }
    for (auto const &dataset : config.datasets)
    {
      std::erase_if(series, [&](auto const &s) { return s.dataset == dataset; });
      auto fetched = fetch_indicator(dataset, requested, config.years, config.endpoint);
      series.insert(series.end(), fetched.begin(), fetched.end());
    }
  }

  std::vector<std::string> datasets = config.datasets;
  if (datasets.empty())
  {
    std::set<std::string> ids;
    for (auto const &s : series)
    {
      ids.insert(s.dataset);
    }
    datasets.assign(ids.begin(), ids.end());
  }

  std::map<std::string, Direction> directions;
  for (auto const &dataset : datasets)
  {
    ComparisonFrame frame = make_frame(series, dataset, config.reference_country, config.countries);
    out.matrices.push_back(ratio_matrix(frame));
    directions[dataset] = direction_for(config, dataset);
    out.frames.push_back(std::move(frame));
  }
  out.laggards = laggard_report(out.frames, directions, requested);

  for (auto const &s : series)
  {
    bool const in_dataset = std::find(datasets.begin(), datasets.end(), s.dataset) != datasets.end();
    bool const in_country = config.countries.empty() ||
                            std::find(requested.begin(), requested.end(), s.country) != requested.end();
    if (in_dataset && in_country)
    {
      if (s.points.size() >= 2)
      {
        out.trends.push_back({s.dataset, s.country, trend_summary(s)});
      }
      out.series.push_back(s);
    }
  }
  return out;
}

PairedSeries read_series_file(std::string const &text, std::string const &x_column,
                              std::string const &y_column)
{
  auto const        table = detail::read_csv(text);
  std::size_t const cx    = table.column(x_column);
  std::size_t const cy    = table.column(y_column);
  PairedSeries      series;
  series.label   = y_column;
  series.x_label = x_column;
  series.y_label = y_column;
  for (auto const &row : table.rows)
  {
    auto const x = parse_decimal(row.cells[cx]);
    auto const y = parse_decimal(row.cells[cy]);
    if (!x || !y)
    {
      throw Error(ErrorCode::parse, "series line " + std::to_string(row.line) + ": malformed number");
    }
    series.x.push_back(*x);
    series.y.push_back(*y);
  }
  if (series.x.empty())
  {
    throw Error(ErrorCode::empty_dataset, "series file has no data rows");
  }
  return series;
}

void check_reference(AnalysisReport &report, RunConfig const &config, std::string const &quantity,
                     std::optional<double> computed)
{
  auto const it = config.reference_values.find(quantity);
  if (it == config.reference_values.end() || !computed)
  {
    return;
  }
  bool const matched = approx_equal(*computed, it->second, config.reference_tolerance);
  report.reference_checks.push_back({quantity, it->second, *computed, matched});
  if (!matched)
  {
    report.discrepancies.push_back(
        {quantity, it->second, *computed,
         "reference value " + format_shortest(it->second) + " is not reproduced by the input data (computed " +
             format_shortest(round_to(*computed, 6)) + ")"});
  }
}

std::optional<double> coefficient_of(StatsOutput const &stats, CorrelationMethod method)
{
  for (auto const &c : stats.correlations)
  {
    if (c.method == method)
    {
      return c.coefficient;
    }
  }
  return std::nullopt;
}

}  // namespace

RunOutcome run_analysis(RunConfig const &config)
{
  RunOutcome      outcome;
  AnalysisReport &report = outcome.report;
  report.version         = std::string{tool_version()};

  std::future<ComparisonOutput> comparison;
  try
  {
    if (!(config.confidence > 0.0 && config.confidence < 1.0))
    {
      throw Error(ErrorCode::configuration, "confidence must lie in (0, 1)");
    }
    bool const needs_registry = config.stages.validate || config.stages.model;
    if (needs_registry && !config.registry)
    {
      throw Error(ErrorCode::configuration, "missing --registry input");
    }
    if (config.stages.model && (!config.capacity || !config.demand))
    {
      throw Error(ErrorCode::configuration, "the model needs --capacity and --demand inputs");
    }
    if (config.stages.stats && !config.stages.model && !config.series)
    {
      throw Error(ErrorCode::configuration, "missing --series input");
    }
    bool const want_compare = config.stages.compare && (config.indicators || config.fetch);
    if (config.stages.compare && !config.stages.model && !want_compare)
    {
      throw Error(ErrorCode::configuration, "missing --indicators input (or --fetch)");
    }

    // Read every input up front so configuration problems surface before
    // any computation.
    std::string registry_text;
    std::string capacity_text;
    std::string demand_text;
    std::string ledger_text;
    std::string series_text;
    std::string indicator_text;
    if (needs_registry)
    {
      registry_text = load_input(report, "registry", *config.registry);
    }
    if (config.stages.model)
    {
      capacity_text = load_input(report, "capacity", *config.capacity);
      demand_text   = load_input(report, "demand", *config.demand);
      if (config.ledger)
      {
        ledger_text = load_input(report, "ledger", *config.ledger);
      }
    }
    if (config.stages.stats && config.series)
    {
      series_text = load_input(report, "series", *config.series);
    }
    if (want_compare && config.indicators)
    {
      indicator_text = load_input(report, "indicators", *config.indicators);
    }

    // Comparison is independent of the model and statistics.
    if (want_compare)
    {
      comparison = std::async(std::launch::async, run_compare, std::cref(config), indicator_text);
    }

    std::vector<AnnualAggregate> registry;
    if (needs_registry)
    {
      registry = parse_registry(registry_text);
      for (auto const &aggregate : registry)
      {
        report.validation.push_back(validate_annual_totals(aggregate));
        report.validation_passed = report.validation_passed && report.validation.back().pass();
      }
    }

    if (config.stages.model)
    {
      report.spc_inputs = assemble_spc_inputs(registry, parse_capacity_table(capacity_text),
                                              parse_demand_table(demand_text));
      for (auto const &in : report.spc_inputs)
      {
        report.spc.push_back(compute_spc(in));
      }
      report.period      = period_averages(report.spc_inputs);
      report.utilization = utilization_ratios(report.spc_inputs);
      check_reference(report, config, "period.released", report.period->released_tons);
      check_reference(report, config, "period.regenerated", report.period->regenerated_tons);
      check_reference(report, config, "period.capacity", report.period->capacity_baseline_tons);
      check_reference(report, config, "period.demand", report.period->demand_baseline_tons);
      check_reference(report, config, "utilization.capacity",
                      report.utilization->capacity_to_regenerated);
      check_reference(report, config, "utilization.demand", report.utilization->demand_to_regenerated);

      if (config.ledger)
      {
        LedgerOptions options;
        options.monetary_unit  = config.monetary_unit;
        options.allow_negative = config.allow_negative_ledger;
        BalanceOptions balance_options;
        balance_options.conversion_rate = config.conversion_rate;
        balance_options.dimensionless   = config.dimensionless;
        balance_options.tolerance       = config.balance_tolerance;
        for (auto const &ledger : parse_ledger_table(ledger_text, options))
        {
          TrcResult const trc = compute_trc(ledger);
          report.trc.push_back(trc);
          auto const spc = std::find_if(report.spc.begin(), report.spc.end(),
                                        [&](auto const &s) { return s.year == trc.year; });
          if (spc != report.spc.end())
          {
            report.balance.push_back(balance(*spc, trc, balance_options));
          }
          else
          {
            report.notes.push_back("ledger year " + std::to_string(trc.year) +
                                   " has no registry year; balance skipped");
          }
        }
      }
    }

    if (config.stages.stats && (config.series || !report.spc.empty()))
    {
      StatsOutput stats;
      if (config.series)
      {
        stats.series = read_series_file(series_text, config.series_x, config.series_y);
      }
      else
      {
        stats.series.x_label = "year";
        stats.series.y_label = config.signed_values ? "spc_average" : "spc_magnitude";
        stats.series.label   = stats.series.y_label;
        stats.y_unit         = "t";
        for (auto const &spc : report.spc)
        {
          stats.series.x.push_back(spc.year);
          stats.series.y.push_back(config.signed_values ? spc.spc_average : spc.magnitude);
        }
      }
      if (config.index_axis)
      {
        stats.series.x       = index_axis(stats.series.x.size());
        stats.series.x_label = "index";
      }
      if (stats.series.y.size() >= 2)
      {
        stats.summary = describe(stats.series.y);
      }
      for (auto const method : config.methods)
      {
        stats.correlations.push_back(correlate(method, stats.series, config.confidence));
      }
      if (stats.summary)
      {
        check_reference(report, config, "spc.mean", stats.summary->mean);
        check_reference(report, config, "spc.variance", stats.summary->variance);
        check_reference(report, config, "spc.std_dev", stats.summary->std_dev);
      }
      check_reference(report, config, "spc.pearson", coefficient_of(stats, CorrelationMethod::pearson));
      check_reference(report, config, "spc.kendall", coefficient_of(stats, CorrelationMethod::kendall));
      check_reference(report, config, "spc.spearman",
                      coefficient_of(stats, CorrelationMethod::spearman));
      report.stats = std::move(stats);
    }

    if (comparison.valid())
    {
      report.comparison = comparison.get();
    }
  }
  catch (Error const &e)
  {
    if (comparison.valid())
    {
      try
      {
        comparison.get();
      }
      catch (Error const &)
      {
        // the first failure is the one reported
      }
    }
    report.error       = e.what();
    outcome.exit_code  = classify(e.code());
    return outcome;
  }

  if (!report.validation_passed)
  {
    outcome.exit_code = exit_code::validation_failure;
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

double derived(double value)
{
  return round_to(value, 6);
}

ojson optional_derived(std::optional<double> const &value)
{
  return value ? ojson(derived(*value)) : ojson(nullptr);
}

ojson correlation_json(CorrelationReport const &c)
{
  ojson j;
  j["method"]      = to_string(c.method);
  j["coefficient"] = derived(c.coefficient);
  j["n"]           = c.n;
  if (c.method == CorrelationMethod::pearson)
  {
    j["confidence"] = c.confidence;
    j["ci_low"]     = optional_derived(c.ci_low);
    j["ci_high"]    = optional_derived(c.ci_high);
    j["p_value"]    = optional_derived(c.p_value);
  }
  return j;
}

ojson direction_json(Direction d)
{
  return d == Direction::higher_is_better ? "higher_is_better" : "higher_is_worse";
}

}  // namespace

std::string to_json(AnalysisReport const &report)
{
  ojson root;
  root["tool"] = {{"name", "circex"}, {"version", report.version}};

  ojson inputs = ojson::array();
  for (auto const &input : report.inputs)
  {
    inputs.push_back({{"role", input.role}, {"path", input.path}, {"sha256", input.sha256}});
  }
  root["inputs"] = inputs;

  if (!report.validation.empty())
  {
    ojson years = ojson::array();
    for (auto const &v : report.validation)
    {
      years.push_back({{"year", v.year},
                       {"released_delta", derived(v.released_delta)},
                       {"regenerated_delta", derived(v.regenerated_delta)},
                       {"pass", v.pass()}});
    }
    root["validation"] = {{"passed", report.validation_passed}, {"years", years}};
  }

  if (!report.spc.empty())
  {
    ojson years        = ojson::array();
    ojson released     = ojson::array();
    ojson regenerated  = ojson::array();
    ojson capacity_b   = ojson::array();
    ojson demand_b     = ojson::array();
    ojson capacity     = ojson::array();
    ojson demand       = ojson::array();
    ojson average      = ojson::array();
    ojson magnitude    = ojson::array();
    for (std::size_t i = 0; i < report.spc.size(); ++i)
    {
      auto const &in  = report.spc_inputs[i];
      auto const &out = report.spc[i];
      years.push_back(out.year);
      released.push_back(in.released_tons ? ojson(*in.released_tons) : ojson(nullptr));
      regenerated.push_back(in.regenerated_with_systems_tons);
      capacity_b.push_back(*in.capacity_baseline_tons);
      demand_b.push_back(*in.demand_baseline_tons);
      capacity.push_back(derived(out.spc_capacity));
      demand.push_back(derived(out.spc_demand));
      average.push_back(derived(out.spc_average));
      magnitude.push_back(derived(out.magnitude));
    }
    root["years"]  = years;
    root["inputs_by_year"] = {{"released_tons", released},
                              {"regenerated_tons", regenerated},
                              {"capacity_baseline_tons", capacity_b},
                              {"demand_baseline_tons", demand_b}};
    root["spc"] = {{"capacity", capacity}, {"demand", demand}, {"average", average}, {"magnitude", magnitude}};
  }

  if (!report.trc.empty())
  {
    ojson trc = {{"years", ojson::array()},          {"administrative", ojson::array()},
                 {"market", ojson::array()},         {"fixed", ojson::array()},
                 {"performance", ojson::array()},    {"alternative", ojson::array()},
                 {"variable", ojson::array()},       {"total", ojson::array()}};
    for (auto const &t : report.trc)
    {
      trc["years"].push_back(t.year);
      trc["administrative"].push_back(derived(t.administrative));
      trc["market"].push_back(derived(t.market));
      trc["fixed"].push_back(derived(t.fixed));
      trc["performance"].push_back(derived(t.performance));
      trc["alternative"].push_back(derived(t.alternative));
      trc["variable"].push_back(derived(t.variable));
      trc["total"].push_back(derived(t.total));
    }
    root["trc"] = trc;
  }

  if (!report.balance.empty())
  {
    ojson b = {{"years", ojson::array()},  {"spc", ojson::array()},          {"spc_sign", ojson::array()},
               {"trc", ojson::array()},    {"comparable", ojson::array()},   {"ratio", ojson::array()},
               {"log_residual", ojson::array()}, {"holds", ojson::array()}, {"advisory", ojson::array()}};
    for (auto const &r : report.balance)
    {
      b["years"].push_back(r.year);
      b["spc"].push_back(derived(r.spc));
      b["spc_sign"].push_back(r.spc_sign);
      b["trc"].push_back(derived(r.trc));
      b["comparable"].push_back(r.comparable);
      b["ratio"].push_back(optional_derived(r.ratio));
      b["log_residual"].push_back(optional_derived(r.log_residual));
      b["holds"].push_back(r.holds);
      b["advisory"].push_back(r.advisory);
    }
    root["balance"] = b;
  }

  if (report.period)
  {
    auto const &p            = *report.period;
    root["period_averages"] = {{"years", p.years},
                               {"released_tons", optional_derived(p.released_tons)},
                               {"regenerated_tons", derived(p.regenerated_tons)},
                               {"capacity_baseline_tons", optional_derived(p.capacity_baseline_tons)},
                               {"demand_baseline_tons", optional_derived(p.demand_baseline_tons)},
                               {"spc_average", optional_derived(p.spc_average)}};
  }
  if (report.utilization)
  {
    root["utilization"] = {
        {"capacity_to_regenerated", derived(report.utilization->capacity_to_regenerated)},
        {"demand_to_regenerated", derived(report.utilization->demand_to_regenerated)}};
  }

  if (report.stats)
  {
    auto const &s = *report.stats;
    ojson       stats;
    stats["series"] = {{"label", s.series.label},
                       {"x_label", s.series.x_label},
                       {"y_label", s.series.y_label},
                       {"n", s.series.x.size()}};
    if (s.summary)
    {
      stats["summary"] = {{"n", s.summary->n},
                          {"mean", derived(s.summary->mean)},
                          {"variance", derived(s.summary->variance)},
                          {"std_dev", derived(s.summary->std_dev)},
                          {"min", derived(s.summary->min)},
                          {"max", derived(s.summary->max)}};
    }
    ojson correlations = ojson::array();
    for (auto const &c : s.correlations)
    {
      correlations.push_back(correlation_json(c));
    }
    stats["correlations"] = correlations;
    root["stats"]         = stats;
  }

  if (report.comparison)
  {
    auto const &c = *report.comparison;
    ojson       frames = ojson::array();
    for (std::size_t i = 0; i < c.frames.size(); ++i)
    {
      auto const &frame  = c.frames[i];
      auto const &matrix = c.matrices[i];
      ojson       values = ojson::object();
      for (auto const &entry : frame.entries)
      {
        values[entry.country] = entry.value;
      }
      ojson ratios = ojson::object();
      for (std::size_t r = 0; r < matrix.countries.size(); ++r)
      {
        ojson row = ojson::object();
        for (std::size_t k = 0; k < matrix.countries.size(); ++k)
        {
          row[matrix.countries[k]] = derived(matrix.ratio[r][k]);
        }
        ratios[matrix.countries[r]] = row;
      }
      frames.push_back({{"dataset", frame.dataset},
                        {"year", frame.year},
                        {"unit", to_string(frame.unit)},
                        {"reference_country", frame.reference_country},
                        {"values", values},
                        {"ratio_matrix", ratios}});
    }
    ojson rankings = ojson::array();
    for (auto const &d : c.laggards.datasets)
    {
      ojson ranking = ojson::array();
      for (auto const &e : d.ranking)
      {
        ranking.push_back({{"country", e.country}, {"value", e.value}, {"rank", e.rank}});
      }
      rankings.push_back({{"dataset", d.dataset},
                          {"direction", direction_json(d.direction)},
                          {"ranking", ranking},
                          {"absent", d.absent}});
    }
    ojson composite = ojson::array();
    for (auto const &e : c.laggards.composite)
    {
      composite.push_back({{"country", e.country},
                           {"mean_rank", derived(e.mean_rank)},
                           {"datasets", e.datasets},
                           {"position", e.position}});
    }
    ojson trends = ojson::array();
    for (auto const &t : c.trends)
    {
      trends.push_back({{"dataset", t.dataset},
                        {"country", t.country},
                        {"start_year", t.trend.start_year},
                        {"start", t.trend.start},
                        {"end_year", t.trend.end_year},
                        {"end", t.trend.end},
                        {"absolute_change", derived(t.trend.absolute_change)},
                        {"relative_change", optional_derived(t.trend.relative_change)},
                        {"monotone", t.trend.monotone}});
    }
    root["comparison"] = {{"frames", frames},
                          {"rankings", rankings},
                          {"composite", composite},
                          {"trends", trends}};
  }

  ojson checks = ojson::array();
  for (auto const &check : report.reference_checks)
  {
    checks.push_back({{"quantity", check.quantity},
                      {"reference", check.reference},
                      {"computed", derived(check.computed)},
                      {"matched", check.matched}});
  }
  root["reference_checks"] = checks;

  ojson notes = ojson::array();
  for (auto const &note : report.discrepancies)
  {
    notes.push_back({{"quantity", note.quantity},
                     {"reference", note.reference},
                     {"computed", derived(note.computed)},
                     {"note", note.note}});
  }
  root["discrepancies"] = notes;
  root["notes"]         = report.notes;
  if (report.error)
  {
    root["error"] = *report.error;
  }
  return root.dump(2) + "\n";
}

std::string to_csv(AnalysisReport const &report)
{
  std::ostringstream out;
  bool const         with_trc = !report.balance.empty();
  out << "year,released_tons,regenerated_tons,capacity_baseline_tons,demand_baseline_tons,"
         "spc_capacity,spc_demand,spc_average,spc_magnitude";
  if (with_trc)
  {
    out << ",trc_total,balance_ratio,balance_log_residual";
  }
  out << '\n';
  auto const cell = [](std::optional<double> v) { return v ? format_shortest(*v) : std::string{}; };
  for (std::size_t i = 0; i < report.spc.size(); ++i)
  {
    auto const &in = report.spc_inputs[i];
    auto const &s  = report.spc[i];
    out << s.year << ',' << cell(in.released_tons) << ',' << format_shortest(in.regenerated_with_systems_tons)
        << ',' << cell(in.capacity_baseline_tons) << ',' << cell(in.demand_baseline_tons) << ','
        << format_shortest(derived(s.spc_capacity)) << ',' << format_shortest(derived(s.spc_demand))
        << ',' << format_shortest(derived(s.spc_average)) << ','
        << format_shortest(derived(s.magnitude));
    if (with_trc)
    {
      auto const b = std::find_if(report.balance.begin(), report.balance.end(),
                                  [&](auto const &r) { return r.year == s.year; });
      if (b != report.balance.end())
      {
        out << ',' << format_shortest(derived(b->trc)) << ','
            << cell(b->ratio ? std::optional{derived(*b->ratio)} : std::nullopt) << ','
            << cell(b->log_residual ? std::optional{derived(*b->log_residual)} : std::nullopt);
      }
      else
      {
        out << ",,,";
      }
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::string file_stem(std::string name)
{
  for (char &c : name)
  {
    bool const ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok)
    {
      c = '_';
    }
  }
  return name;
}

}  // namespace

std::vector<fs::path> emit_plot_series(AnalysisReport const &report, fs::path const &out_dir)
{
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
  {
    throw Error(ErrorCode::io, "cannot create output directory '" + out_dir.string() + "'");
  }

  std::vector<fs::path> written;
  auto const write = [&](std::string const &stem, std::string const &content) {
    fs::path const path = out_dir / (file_stem(stem) + ".dat");
    detail::write_file(path, content);
    written.push_back(path);
  };

  if (report.stats)
  {
    auto const        &s = report.stats->series;
    std::ostringstream out;
    out << "# " << s.x_label << '\t' << s.y_label;
    if (!report.stats->y_unit.empty())
    {
      out << " [" << report.stats->y_unit << ']';
    }
    out << '\n';
    for (std::size_t i = 0; i < s.x.size(); ++i)
    {
      out << format_shortest(s.x[i]) << '\t' << format_shortest(derived(s.y[i])) << '\n';
    }
    write(s.label, out.str());
  }

  if (!report.trc.empty())
  {
    std::ostringstream out;
    out << "# year\ttrc_total\n";
    for (auto const &t : report.trc)
    {
      out << t.year << '\t' << format_shortest(derived(t.total)) << '\n';
    }
    write("trc_total", out.str());
  }

  if (report.comparison)
  {
    for (auto const &frame : report.comparison->frames)
    {
      std::vector<IndicatorSeries const *> columns;
      std::set<int>                        years;
      for (auto const &entry : frame.entries)
      {
        for (auto const &s : report.comparison->series)
        {
          if (s.dataset == frame.dataset && s.country == entry.country)
          {
            columns.push_back(&s);
            for (auto const &p : s.points)
            {
              years.insert(p.year);
            }
          }
        }
      }
      std::ostringstream out;
      out << "# year";
      for (auto const *column : columns)
      {
        out << '\t' << column->country;
      }
      out << " [" << to_string(frame.unit) << "]\n";
      for (int year : years)
      {
        out << year;
        for (auto const *column : columns)
        {
          auto const v = column->value_at(year);
          out << '\t' << (v ? format_shortest(*v) : std::string{"NaN"});
        }
        out << '\n';
      }
      write(frame.dataset, out.str());
    }
  }
  return written;
}

}  // namespace circex
