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

#include "circex/error.hpp"
#include "circex/numeric.hpp"
#include "csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace circex {

namespace {

using detail::CsvRow;
using detail::CsvTable;

std::string where(CsvRow const &row, std::string_view column)
{
  return "line " + std::to_string(row.line) + ", column '" + std::string{column} + "'";
}

int parse_year(CsvRow const &row, std::size_t index, std::string_view column)
{
  std::string const &cell  = row.cells[index];
  int                value = 0;
  auto const [end, ec]     = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc{} || end != cell.data() + cell.size() || value <= 0)
  {
    throw Error(ErrorCode::parse, where(row, column) + ": malformed year '" + cell + "'");
  }
  return value;
}

double parse_number(CsvRow const &row, std::size_t index, std::string_view column)
{
  auto const value = parse_decimal(row.cells[index]);
  if (!value)
  {
    throw Error(ErrorCode::parse,
                where(row, column) + ": malformed number '" + row.cells[index] + "'");
  }
  return *value;
}

double parse_non_negative(CsvRow const &row, std::size_t index, std::string_view column)
{
  double const value = parse_number(row, index, column);
  if (value < 0.0)
  {
    throw Error(ErrorCode::invariant,
                where(row, column) + ": negative value '" + row.cells[index] + "'");
  }
  return value;
}

double parse_positive(CsvRow const &row, std::size_t index, std::string_view column)
{
  double const value = parse_number(row, index, column);
  if (!(value > 0.0))
  {
    throw Error(ErrorCode::invariant,
                where(row, column) + ": value must be positive, got '" + row.cells[index] + "'");
  }
  return value;
}

bool is_total_label(std::string_view name)
{
  while (!name.empty() && (name.back() == ':' || name.back() == ' '))
  {
    name.remove_suffix(1);
  }
  if (name.size() != 5)
  {
    return false;
  }
  constexpr std::string_view total = "total";
  for (std::size_t i = 0; i < name.size(); ++i)
  {
    char c = name[i];
    if (c >= 'A' && c <= 'Z')
    {
      c = static_cast<char>(c - 'A' + 'a');
    }
    if (c != total[i])
    {
      return false;
    }
  }
  return true;
}

struct YearBuilder
{
  AnnualAggregate                    aggregate;
  bool                               has_total = false;
  std::map<std::string, std::size_t> index;
  std::string                        last_organization;
};

void check_route_invariant(OrganizationRecord const &record)
{
  double const routed = record.routed_regeneration_tons();
  if (routed > record.regenerated_tons + kTonnageTolerance)
  {
    throw Error(ErrorCode::invariant,
                std::to_string(record.year) + " '" + record.organization +
                    "': regeneration routes total " + format_shortest(routed) +
                    " t, above regenerated " + format_shortest(record.regenerated_tons) + " t");
  }
}

}  // namespace

std::string_view to_string(RouteKind kind) noexcept
{
  return kind == RouteKind::regeneration ? "regeneration" : "recovery_only";
}

std::optional<RouteKind> parse_route_kind(std::string_view text) noexcept
{
  if (text == "regeneration")
  {
    return RouteKind::regeneration;
  }
  if (text == "recovery_only")
  {
    return RouteKind::recovery_only;
  }
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<CostCategory, std::string_view>, 7> kCategoryNames{{
    {CostCategory::admin_bank_guarantee, "admin_bank_guarantee"},
    {CostCategory::admin_audit, "admin_audit"},
    {CostCategory::admin_documentation, "admin_documentation"},
    {CostCategory::market_contractor_control, "market_contractor_control"},
    {CostCategory::market_communication, "market_communication"},
    {CostCategory::performance, "performance"},
    {CostCategory::alternative, "alternative"},
}};

// Short names used in hand-written ledgers.
constexpr std::array<std::pair<CostCategory, std::string_view>, 5> kCategoryAliases{{
    {CostCategory::admin_bank_guarantee, "bank_guarantee"},
    {CostCategory::admin_audit, "audit"},
    {CostCategory::admin_documentation, "documentation"},
    {CostCategory::market_contractor_control, "contractor_control"},
    {CostCategory::market_communication, "communication"},
}};

}  // namespace

std::string_view to_string(CostCategory category) noexcept
{
  for (auto const &[value, name] : kCategoryNames)
  {
    if (value == category)
    {
      return name;
    }
  }
  return "unknown";
}

std::optional<CostCategory> parse_cost_category(std::string_view text) noexcept
{
  for (auto const &[value, name] : kCategoryNames)
  {
    if (name == text)
    {
      return value;
    }
  }
  for (auto const &[value, name] : kCategoryAliases)
  {
    if (name == text)
    {
      return value;
    }
  }
  return std::nullopt;
}

std::string_view to_string(IndicatorUnit unit) noexcept
{
  return unit == IndicatorUnit::kg_per_capita ? "kg_per_capita" : "eur_per_kg";
}

std::optional<IndicatorUnit> parse_indicator_unit(std::string_view text) noexcept
{
  if (text == "kg_per_capita")
  {
    return IndicatorUnit::kg_per_capita;
  }
  if (text == "eur_per_kg")
  {
    return IndicatorUnit::eur_per_kg;
  }
  return std::nullopt;
}

double OrganizationRecord::routed_regeneration_tons() const
{
  std::vector<double> tons;
  for (auto const &route : routes)
  {
    if (route.kind == RouteKind::regeneration)
    {
      tons.push_back(route.tons);
    }
  }
  return exact_sum(tons);
}

std::optional<double> IndicatorSeries::value_at(int year) const noexcept
{
  auto const it = std::lower_bound(points.begin(), points.end(), year,
                                   [](IndicatorPoint const &p, int y) { return p.year < y; });
  if (it == points.end() || it->year != year)
  {
    return std::nullopt;
  }
  return it->value;
}

std::vector<AnnualAggregate> parse_registry(std::string_view text)
{
  CsvTable const table = detail::read_csv(text);

  std::size_t const c_year        = table.column("year");
  std::size_t const c_org         = table.column("organization");
  std::size_t const c_released    = table.column("released_tons");
  std::size_t const c_regenerated = table.column("regenerated_tons");
  std::size_t const c_processor   = table.column("processor");
  std::size_t const c_route_tons  = table.column("route_tons");
  std::size_t const c_route_kind  = table.column("route_kind");

  if (table.rows.empty())
  {
    throw Error(ErrorCode::empty_dataset, "registry table has no data rows");
  }

  std::map<int, YearBuilder> years;
  for (CsvRow const &row : table.rows)
  {
    int const          year         = parse_year(row, c_year, "year");
    std::string const &organization = row.cells[c_org];
    YearBuilder       &builder      = years[year];
    builder.aggregate.year          = year;

    if (organization.empty())
    {
      throw Error(ErrorCode::parse, where(row, "organization") + ": empty organization");
    }

    bool const has_route = !row.cells[c_processor].empty();
    if (!has_route && (!row.cells[c_route_tons].empty() || !row.cells[c_route_kind].empty()))
    {
      throw Error(ErrorCode::parse, where(row, "processor") + ": route cells without processor");
    }

    if (is_total_label(organization))
    {
      if (has_route)
      {
        throw Error(ErrorCode::parse, where(row, "processor") + ": TOTAL row cannot carry a route");
      }
      if (builder.has_total)
      {
        throw Error(ErrorCode::duplicate_key,
                    "line " + std::to_string(row.line) + ": second TOTAL row for " +
                        std::to_string(year));
      }
      builder.aggregate.total_released_tons = parse_non_negative(row, c_released, "released_tons");
      builder.aggregate.total_regenerated_tons =
          parse_non_negative(row, c_regenerated, "regenerated_tons");
      builder.has_total         = true;
      builder.last_organization = organization;
      continue;
    }

    double const released    = parse_non_negative(row, c_released, "released_tons");
    double const regenerated = parse_non_negative(row, c_regenerated, "regenerated_tons");

    std::optional<Route> route;
    if (has_route)
    {
      auto const kind = parse_route_kind(row.cells[c_route_kind]);
      if (!kind)
      {
        throw Error(ErrorCode::schema, where(row, "route_kind") + ": unknown route kind '" +
                                           row.cells[c_route_kind] + "'");
      }
      route = Route{row.cells[c_processor], parse_non_negative(row, c_route_tons, "route_tons"),
                    *kind};
    }

    auto const existing = builder.index.find(organization);
    if (existing == builder.index.end())
    {
      OrganizationRecord record;
      record.year             = year;
      record.organization     = organization;
      record.released_tons    = released;
      record.regenerated_tons = regenerated;
      if (route)
      {
        record.routes.push_back(std::move(*route));
      }
      builder.index.emplace(organization, builder.aggregate.records.size());
      builder.aggregate.records.push_back(std::move(record));
    }
    else
    {
      if (builder.last_organization != organization)
      {
        throw Error(ErrorCode::duplicate_key, "line " + std::to_string(row.line) +
                                                  ": organization '" + organization +
                                                  "' appears twice in " + std::to_string(year));
      }
      OrganizationRecord &record = builder.aggregate.records[existing->second];
      if (record.released_tons != released || record.regenerated_tons != regenerated)
      {
        throw Error(ErrorCode::duplicate_key, "line " + std::to_string(row.line) +
                                                  ": organization '" + organization +
                                                  "' repeated with different tonnage");
      }
      if (!route || record.routes.empty())
      {
        throw Error(ErrorCode::duplicate_key, "line " + std::to_string(row.line) +
                                                  ": organization '" + organization +
                                                  "' repeated without a route");
      }
      record.routes.push_back(std::move(*route));
    }
    builder.last_organization = organization;
  }

  std::vector<AnnualAggregate> result;
  result.reserve(years.size());
  for (auto &[year, builder] : years)
  {
    if (builder.aggregate.records.empty())
    {
      throw Error(ErrorCode::empty_dataset,
                  "registry year " + std::to_string(year) + " has no organization rows");
    }
    if (!builder.has_total)
    {
      throw Error(ErrorCode::parse, "registry year " + std::to_string(year) + " has no TOTAL row");
    }
    for (auto const &record : builder.aggregate.records)
    {
      check_route_invariant(record);
    }
    result.push_back(std::move(builder.aggregate));
  }
  return result;
}

AnnualAggregate parse_registry_table(std::string_view text)
{
  auto aggregates = parse_registry(text);
  if (aggregates.size() != 1)
  {
    throw Error(ErrorCode::parse, "expected a single registry year, found " +
                                      std::to_string(aggregates.size()));
  }
  return std::move(aggregates.front());
}

std::string serialize_registry(std::vector<AnnualAggregate> const &aggregates)
{
  constexpr char     d = ',';
  std::ostringstream out;
  out << "year,organization,released_tons,regenerated_tons,processor,route_tons,route_kind\n";
  for (auto const &aggregate : aggregates)
  {
    for (auto const &record : aggregate.records)
    {
      std::string const prefix = std::to_string(record.year) + d +
                                 detail::csv_escape(record.organization, d) + d +
                                 format_shortest(record.released_tons) + d +
                                 format_shortest(record.regenerated_tons) + d;
      if (record.routes.empty())
      {
        out << prefix << d << d << '\n';
      }
      for (auto const &route : record.routes)
      {
        out << prefix << detail::csv_escape(route.processor, d) << d
            << format_shortest(route.tons) << d << to_string(route.kind) << '\n';
      }
    }
    out << aggregate.year << d << "TOTAL" << d << format_shortest(aggregate.total_released_tons)
        << d << format_shortest(aggregate.total_regenerated_tons) << d << d << d << '\n';
  }
  return out.str();
}

std::vector<CapacityRecord> parse_capacity_table(std::string_view text)
{
  CsvTable const    table      = detail::read_csv(text);
  std::size_t const c_year     = table.column("year");
  std::size_t const c_proc     = table.column("processor");
  std::size_t const c_capacity = table.column("licensed_capacity_tons_per_year");
  std::size_t const c_license  = table.column("license_id");
  if (table.rows.empty())
  {
    throw Error(ErrorCode::empty_dataset, "capacity table has no data rows");
  }

  std::vector<CapacityRecord>          records;
  std::set<std::pair<int, std::string>> seen;
  for (CsvRow const &row : table.rows)
  {
    CapacityRecord record;
    record.year      = parse_year(row, c_year, "year");
    record.processor = row.cells[c_proc];
    record.licensed_capacity_tons_per_year =
        parse_positive(row, c_capacity, "licensed_capacity_tons_per_year");
    record.license_id = row.cells[c_license];
    if (record.processor.empty())
    {
      throw Error(ErrorCode::parse, where(row, "processor") + ": empty processor");
    }
    if (!seen.emplace(record.year, record.processor).second)
    {
      throw Error(ErrorCode::duplicate_key, where(row, "processor") + ": '" + record.processor +
                                                "' listed twice for " + std::to_string(record.year));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<DemandEstimate> parse_demand_table(std::string_view text)
{
  CsvTable const    table    = detail::read_csv(text);
  std::size_t const c_year   = table.column("year");
  std::size_t const c_demand = table.column("demand_tons");
  std::size_t const c_source = table.column("source");
  if (table.rows.empty())
  {
    throw Error(ErrorCode::empty_dataset, "demand table has no data rows");
  }

  std::vector<DemandEstimate> estimates;
  std::set<int>               seen;
  for (CsvRow const &row : table.rows)
  {
    DemandEstimate estimate;
    estimate.year        = parse_year(row, c_year, "year");
    estimate.demand_tons = parse_positive(row, c_demand, "demand_tons");
    estimate.source      = row.cells[c_source];
    if (!seen.insert(estimate.year).second)
    {
      throw Error(ErrorCode::duplicate_key,
                  where(row, "year") + ": second demand estimate for " + std::to_string(estimate.year));
    }
    estimates.push_back(std::move(estimate));
  }
  std::sort(estimates.begin(), estimates.end(),
            [](auto const &a, auto const &b) { return a.year < b.year; });
  return estimates;
}

std::vector<CostLedger> parse_ledger_table(std::string_view text, LedgerOptions const &options)
{
  CsvTable const    table      = detail::read_csv(text);
  std::size_t const c_year     = table.column("year");
  std::size_t const c_category = table.column("category");
  std::size_t const c_amount   = table.column("amount");

  std::map<int, CostLedger> ledgers;
  for (CsvRow const &row : table.rows)
  {
    int const  year     = parse_year(row, c_year, "year");
    auto const category = parse_cost_category(row.cells[c_category]);
    if (!category)
    {
      throw Error(ErrorCode::schema, where(row, "category") + ": unknown cost category '" +
                                         row.cells[c_category] + "'");
    }
    double const amount = options.allow_negative ? parse_number(row, c_amount, "amount")
                                                 : parse_non_negative(row, c_amount, "amount");
    CostLedger &ledger   = ledgers[year];
    ledger.year          = year;
    ledger.monetary_unit = options.monetary_unit;
    ledger.entries.push_back(LedgerEntry{*category, amount});
  }

  std::vector<CostLedger> result;
  for (auto &[year, ledger] : ledgers)
  {
    result.push_back(std::move(ledger));
  }
  return result;
}

std::vector<IndicatorSeries> parse_indicator_table(std::string_view text)
{
  CsvTable const    table     = detail::read_csv(text);
  std::size_t const c_dataset = table.column("dataset");
  std::size_t const c_country = table.column("country");
  std::size_t const c_year    = table.column("year");
  std::size_t const c_value   = table.column("value");
  std::size_t const c_unit    = table.column("unit");
  if (table.rows.empty())
  {
    throw Error(ErrorCode::empty_dataset, "indicator table has no data rows");
  }

  std::map<std::pair<std::string, std::string>, IndicatorSeries> grouped;
  for (CsvRow const &row : table.rows)
  {
    auto const unit = parse_indicator_unit(row.cells[c_unit]);
    if (!unit)
    {
      throw Error(ErrorCode::schema,
                  where(row, "unit") + ": unknown unit '" + row.cells[c_unit] + "'");
    }
    std::string const &dataset = row.cells[c_dataset];
    std::string const &country = row.cells[c_country];
    if (dataset.empty() || country.empty())
    {
      throw Error(ErrorCode::parse, "line " + std::to_string(row.line) + ": empty dataset or country");
    }
    int const    year  = parse_year(row, c_year, "year");
    double const value = parse_non_negative(row, c_value, "value");

    auto [it, inserted] = grouped.try_emplace({dataset, country});
    IndicatorSeries &series = it->second;
    if (inserted)
    {
      series.dataset = dataset;
      series.country = country;
      series.unit    = *unit;
    }
    else if (series.unit != *unit)
    {
      throw Error(ErrorCode::schema, where(row, "unit") + ": unit changes within series " +
                                         dataset + "/" + country);
    }
    series.points.push_back(IndicatorPoint{year, value});
  }

  std::vector<IndicatorSeries> result;
  result.reserve(grouped.size());
  for (auto &[key, series] : grouped)
  {
    std::stable_sort(series.points.begin(), series.points.end(),
                     [](auto const &a, auto const &b) { return a.year < b.year; });
    for (std::size_t i = 1; i < series.points.size(); ++i)
    {
      if (series.points[i].year == series.points[i - 1].year)
      {
        throw Error(ErrorCode::duplicate_point, series.dataset + "/" + series.country + " has two values for " +
                                                    std::to_string(series.points[i].year));
      }
    }
    result.push_back(std::move(series));
  }
  return result;
}

std::string serialize_indicator_table(std::vector<IndicatorSeries> const &series)
{
  std::ostringstream out;
  out << "dataset,country,year,value,unit\n";
  for (auto const &s : series)
  {
    for (auto const &point : s.points)
    {
      out << detail::csv_escape(s.dataset, ',') << ',' << detail::csv_escape(s.country, ',') << ','
          << point.year << ',' << format_shortest(point.value) << ',' << to_string(s.unit) << '\n';
    }
  }
  return out.str();
}

TotalsDelta validate_annual_totals(AnnualAggregate const &aggregate, double tolerance_tons)
{
  std::vector<double> released;
  std::vector<double> regenerated;
  for (auto const &record : aggregate.records)
  {
    released.push_back(record.released_tons);
    regenerated.push_back(record.regenerated_tons);
  }
  TotalsDelta delta;
  delta.year              = aggregate.year;
  delta.released_delta    = exact_sum(released) - aggregate.total_released_tons;
  delta.regenerated_delta = exact_sum(regenerated) - aggregate.total_regenerated_tons;
  // Half an ulp of slack at print precision: 0.001 t must pass.
  double const limit     = tolerance_tons * (1.0 + 1e-9);
  delta.released_ok      = std::fabs(delta.released_delta) <= limit;
  delta.regenerated_ok   = std::fabs(delta.regenerated_delta) <= limit;
  return delta;
}

std::map<int, double> capacity_by_year(std::vector<CapacityRecord> const &records)
{
  std::map<int, ExactAccumulator> sums;
  for (auto const &record : records)
  {
    sums[record.year].add(record.licensed_capacity_tons_per_year);
  }
  std::map<int, double> result;
  for (auto const &[year, acc] : sums)
  {
    result.emplace(year, acc.result());
  }
  return result;
}

}  // namespace circex
