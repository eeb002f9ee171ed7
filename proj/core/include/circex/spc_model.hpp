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

#include <optional>
#include <string>
#include <vector>

namespace circex {

/// Inputs for one year of the social-public-cost model.
struct SpcInputs
{
  int                   year = 0;
  double                regenerated_with_systems_tons = 0.0;
  std::optional<double> capacity_baseline_tons;  // licensed processing capacity
  std::optional<double> demand_baseline_tons;    // market demand for regenerated goods
  std::optional<double> released_tons;           // informational, for period means
};

/// Social public costs in tons. Negative values mean the system regenerates
/// less than the no-system baseline.
struct SpcResult
{
  int    year          = 0;
  double spc_capacity  = 0.0;  // regenerated - capacity baseline
  double spc_demand    = 0.0;  // regenerated - demand baseline
  double spc_average   = 0.0;  // (spc_capacity + spc_demand) / 2
  double magnitude     = 0.0;  // |spc_average|
};

/// Throws incomplete_input when a baseline is missing and invariant when
/// regenerated < 0 or a baseline is not positive.
SpcResult compute_spc(SpcInputs const &in);

/// Joins registry years with capacity and demand tables. Years missing from
/// the registry are absent from the result; missing baselines stay empty.
std::vector<SpcInputs> assemble_spc_inputs(std::vector<AnnualAggregate> const &registry,
                                           std::vector<CapacityRecord> const  &capacity,
                                           std::vector<DemandEstimate> const  &demand);

struct TrcResult
{
  int    year           = 0;
  double administrative = 0.0;  // bank guarantee + audit + documentation
  double market         = 0.0;  // contractor control + communication
  double fixed          = 0.0;  // administrative + market
  double performance    = 0.0;
  double alternative    = 0.0;
  double variable       = 0.0;  // performance + alternative
  double total          = 0.0;  // fixed + variable
};

/// Category sums are exact (correctly rounded), so they do not depend on
/// entry order or on how an amount is split within its category.
TrcResult compute_trc(CostLedger const &ledger);

struct BalanceOptions
{
  /// Monetary units per ton; required unless `dimensionless` is set.
  std::optional<double> conversion_rate;
  bool                  dimensionless = false;
  double                tolerance     = 1e-6;  // on |ln(SPC / TrC)|
};

struct BalanceReport
{
  int                   year     = 0;
  double                spc      = 0.0;  // magnitude, converted when a rate is given
  int                   spc_sign = 0;    // sign of the unconverted average
  double                trc      = 0.0;
  bool                  comparable = false;
  std::optional<double> ratio;
  std::optional<double> log_residual;  // natural log of ratio
  bool                  holds = false;
  std::string           advisory;
};

/// Tests SPC = TrC as ln(SPC / TrC) = 0.
///
/// Throws undefined when trc.total is zero and domain when it is negative
/// or the conversion rate is not positive. A zero SPC magnitude yields
/// ratio 0 with no log residual and an advisory.
BalanceReport balance(SpcResult const &spc, TrcResult const &trc, BalanceOptions const &options);

struct PeriodAverages
{
  std::size_t           years = 0;
  std::optional<double> released_tons;
  double                regenerated_tons = 0.0;
  std::optional<double> capacity_baseline_tons;
  std::optional<double> demand_baseline_tons;
  std::optional<double> spc_average;
};

/// Arithmetic mean of each column over the supplied years. Optional
/// columns are averaged only when every row carries them.
PeriodAverages period_averages(std::vector<SpcInputs> const &rows);

struct UtilizationRatios
{
  double capacity_to_regenerated = 0.0;
  double demand_to_regenerated   = 0.0;
};

UtilizationRatios utilization_ratios(std::vector<SpcInputs> const &rows);

}  // namespace circex
