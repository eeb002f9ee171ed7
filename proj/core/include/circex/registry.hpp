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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace circex {

enum class RouteKind
{
  regeneration,
  recovery_only,  // recovered without regeneration; never counted as regenerated
};

std::string_view          to_string(RouteKind kind) noexcept;
std::optional<RouteKind>  parse_route_kind(std::string_view text) noexcept;

/// Tonnage handed from a recovery organization to one processor.
struct Route
{
  std::string processor;
  double      tons = 0.0;
  RouteKind   kind = RouteKind::regeneration;

  bool operator==(Route const &) const = default;
};

/// One recovery organization's annual registry row.
struct OrganizationRecord
{
  int                year = 0;
  std::string        organization;
  double             released_tons    = 0.0;
  double             regenerated_tons = 0.0;
  std::vector<Route> routes;

  /// Tonnage routed to regeneration; recovery-only routes are excluded.
  double routed_regeneration_tons() const;

  bool operator==(OrganizationRecord const &) const = default;
};

/// A registry year: organization rows plus the printed TOTAL row.
struct AnnualAggregate
{
  int                             year = 0;
  double                          total_released_tons    = 0.0;
  double                          total_regenerated_tons = 0.0;
  std::vector<OrganizationRecord> records;

  bool operator==(AnnualAggregate const &) const = default;
};

/// Licensed annual processing capacity of one processor.
struct CapacityRecord
{
  int         year = 0;
  std::string processor;
  double      licensed_capacity_tons_per_year = 0.0;
  std::string license_id;

  bool operator==(CapacityRecord const &) const = default;
};

/// Market demand for regenerated products (internal market + export).
struct DemandEstimate
{
  int         year        = 0;
  double      demand_tons = 0.0;
  std::string source;

  bool operator==(DemandEstimate const &) const = default;
};

enum class CostCategory
{
  admin_bank_guarantee,
  admin_audit,
  admin_documentation,
  market_contractor_control,
  market_communication,
  performance,
  alternative,
};

std::string_view            to_string(CostCategory category) noexcept;
std::optional<CostCategory> parse_cost_category(std::string_view text) noexcept;

struct LedgerEntry
{
  CostCategory category = CostCategory::performance;
  double       amount   = 0.0;

  bool operator==(LedgerEntry const &) const = default;
};

/// Itemized transaction costs for one year. `monetary_unit` is an opaque
/// label; amounts are never converted between units.
struct CostLedger
{
  int                      year = 0;
  std::string              monetary_unit;
  std::vector<LedgerEntry> entries;

  bool operator==(CostLedger const &) const = default;
};

enum class IndicatorUnit
{
  kg_per_capita,
  eur_per_kg,
};

std::string_view             to_string(IndicatorUnit unit) noexcept;
std::optional<IndicatorUnit> parse_indicator_unit(std::string_view text) noexcept;

struct IndicatorPoint
{
  int    year  = 0;
  double value = 0.0;

  bool operator==(IndicatorPoint const &) const = default;
};

/// Country indicator series; points are strictly year-increasing.
struct IndicatorSeries
{
  std::string                 dataset;
  std::string                 country;
  IndicatorUnit               unit = IndicatorUnit::kg_per_capita;
  std::vector<IndicatorPoint> points;

  std::optional<double> value_at(int year) const noexcept;

  bool operator==(IndicatorSeries const &) const = default;
};

// ---------------------------------------------------------------------------
// Ingestion

/// Parses a registry table holding exactly one year.
///
/// Columns: year,organization,released_tons,regenerated_tons,processor,
/// route_tons,route_kind. An organization with several routes spans several
/// consecutive rows repeating its tonnage cells; the row whose organization
/// is `TOTAL` carries the printed totals. Numeric cells take '.' or ',' as
/// decimal separator (quote the cell, or use ';' as the delimiter, when the
/// comma is the decimal mark).
AnnualAggregate parse_registry_table(std::string_view text);

/// Same format, any number of years; result is ordered by year.
std::vector<AnnualAggregate> parse_registry(std::string_view text);

/// Writes aggregates in the comma-delimited registry schema.
std::string serialize_registry(std::vector<AnnualAggregate> const &aggregates);

std::vector<CapacityRecord> parse_capacity_table(std::string_view text);
std::vector<DemandEstimate> parse_demand_table(std::string_view text);

struct LedgerOptions
{
  std::string monetary_unit  = "EUR";
  bool        allow_negative = false;
};

/// One ledger per year, ordered by year.
std::vector<CostLedger> parse_ledger_table(std::string_view text, LedgerOptions const &options = {});

/// Columns: dataset,country,year,value,unit. Grouped by (dataset, country);
/// points sorted by year.
std::vector<IndicatorSeries> parse_indicator_table(std::string_view text);
std::string                  serialize_indicator_table(std::vector<IndicatorSeries> const &series);

// ---------------------------------------------------------------------------
// Validation

struct TotalsDelta
{
  int    year               = 0;
  double released_delta     = 0.0;  // sum of rows minus printed total
  double regenerated_delta  = 0.0;
  bool   released_ok        = true;
  bool   regenerated_ok     = true;

  bool pass() const noexcept
  {
    return released_ok && regenerated_ok;
  }
};

TotalsDelta validate_annual_totals(AnnualAggregate const &aggregate,
                                   double                 tolerance_tons = 0.001);

/// Registry year -> capacity baseline (sum of licensed capacities).
std::map<int, double> capacity_by_year(std::vector<CapacityRecord> const &records);

}  // namespace circex
