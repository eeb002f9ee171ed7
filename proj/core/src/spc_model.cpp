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

#include "circex/spc_model.hpp"

#include "circex/error.hpp"
#include "circex/numeric.hpp"

#include <array>
#include <cmath>
#include <map>

namespace circex {

SpcResult compute_spc(SpcInputs const &in)
{
  if (!in.capacity_baseline_tons || !in.demand_baseline_tons)
  {
    throw Error(ErrorCode::incomplete_input,
                std::string{"year "} + std::to_string(in.year) + ": missing " +
                    (!in.capacity_baseline_tons ? "capacity" : "demand") + " baseline");
  }
  if (!(in.regenerated_with_systems_tons >= 0.0))
  {
    throw Error(ErrorCode::invariant, "regenerated tonnage must be non-negative");
  }
  if (!(*in.capacity_baseline_tons > 0.0) || !(*in.demand_baseline_tons > 0.0))
  {
    throw Error(ErrorCode::invariant, "baselines must be positive");
  }

  SpcResult r;
  r.year         = in.year;
  r.spc_capacity = in.regenerated_with_systems_tons - *in.capacity_baseline_tons;
  r.spc_demand   = in.regenerated_with_systems_tons - *in.demand_baseline_tons;
  r.spc_average  = (r.spc_capacity + r.spc_demand) / 2.0;
  r.magnitude    = std::fabs(r.spc_average);
  return r;
}

std::vector<SpcInputs> assemble_spc_inputs(std::vector<AnnualAggregate> const &registry,
                                           std::vector<CapacityRecord> const  &capacity,
                                           std::vector<DemandEstimate> const  &demand)
{
  auto const           capacity_totals = capacity_by_year(capacity);
  std::map<int, double> demand_by_year;
  for (auto const &estimate : demand)
  {
    demand_by_year[estimate.year] = estimate.demand_tons;
  }

  std::vector<SpcInputs> rows;
  for (auto const &aggregate : registry)
  {
    SpcInputs in;
    in.year                          = aggregate.year;
    in.regenerated_with_systems_tons = aggregate.total_regenerated_tons;
    in.released_tons                 = aggregate.total_released_tons;
    if (auto const it = capacity_totals.find(aggregate.year); it != capacity_totals.end())
    {
      in.capacity_baseline_tons = it->second;
    }
    if (auto const it = demand_by_year.find(aggregate.year); it != demand_by_year.end())
    {
      in.demand_baseline_tons = it->second;
    }
    rows.push_back(in);
  }
  return rows;
}

TrcResult compute_trc(CostLedger const &ledger)
{
  std::array<ExactAccumulator, 7> sums;
  for (auto const &entry : ledger.entries)
  {
    if (!std::isfinite(entry.amount))
    {
      throw Error(ErrorCode::domain, "non-finite ledger amount");
    }
    sums[static_cast<std::size_t>(entry.category)].add(entry.amount);
  }
  auto const sum_of = [&](std::initializer_list<CostCategory> categories) {
    ExactAccumulator acc;
    for (auto category : categories)
    {
      acc.add(sums[static_cast<std::size_t>(category)].result());
    }
    return acc.result();
  };

  TrcResult r;
  r.year           = ledger.year;
  r.administrative = sum_of({CostCategory::admin_bank_guarantee, CostCategory::admin_audit,
                             CostCategory::admin_documentation});
  r.market      = sum_of({CostCategory::market_contractor_control, CostCategory::market_communication});
  r.performance = sums[static_cast<std::size_t>(CostCategory::performance)].result();
  r.alternative = sums[static_cast<std::size_t>(CostCategory::alternative)].result();
  r.fixed       = r.administrative + r.market;
  r.variable    = r.performance + r.alternative;
  r.total       = r.fixed + r.variable;
  return r;
}

BalanceReport balance(SpcResult const &spc, TrcResult const &trc, BalanceOptions const &options)
{
  if (trc.total == 0.0)
  {
    throw Error(ErrorCode::undefined, "transaction costs are zero; SPC/TrC is undefined");
  }
  if (!(trc.total > 0.0))
  {
    throw Error(ErrorCode::domain, "transaction costs must be positive for the log form");
  }
  if (options.conversion_rate && !(*options.conversion_rate > 0.0))
  {
    throw Error(ErrorCode::domain, "conversion rate must be positive");
  }

  BalanceReport report;
  report.year     = spc.year;
  report.spc_sign = spc.spc_average > 0.0 ? 1 : (spc.spc_average < 0.0 ? -1 : 0);
  report.trc      = trc.total;
  report.spc      = spc.magnitude;
  if (options.conversion_rate)
  {
    report.spc *= *options.conversion_rate;
    report.comparable = true;
  }
  else if (options.dimensionless)
  {
    report.comparable = true;
  }

  if (!report.comparable)
  {
    report.advisory = "SPC is in tons and TrC in money; supply a conversion rate or declare "
                      "both dimensionless";
    return report;
  }

  report.ratio = report.spc / report.trc;
  if (report.spc == 0.0)
  {
    report.advisory = "SPC magnitude is zero; log residual undefined";
    return report;
  }
  report.log_residual = std::log(*report.ratio);
  report.holds        = std::fabs(*report.log_residual) <= options.tolerance;
  return report;
}

PeriodAverages period_averages(std::vector<SpcInputs> const &rows)
{
  if (rows.empty())
  {
    throw Error(ErrorCode::insufficient_data, "period averages need at least one year");
  }

  auto const n = static_cast<double>(rows.size());
  auto const mean_of = [&](auto project) -> std::optional<double> {
    ExactAccumulator acc;
    for (auto const &row : rows)
    {
      std::optional<double> const value = project(row);
      if (!value)
      {
        return std::nullopt;
      }
      acc.add(*value);
    }
    return acc.result() / n;
  };

  PeriodAverages out;
  out.years         = rows.size();
  out.released_tons = mean_of([](SpcInputs const &r) { return r.released_tons; });
  out.regenerated_tons =
      *mean_of([](SpcInputs const &r) { return std::optional{r.regenerated_with_systems_tons}; });
  out.capacity_baseline_tons = mean_of([](SpcInputs const &r) { return r.capacity_baseline_tons; });
  out.demand_baseline_tons   = mean_of([](SpcInputs const &r) { return r.demand_baseline_tons; });
  if (out.capacity_baseline_tons && out.demand_baseline_tons)
  {
    out.spc_average = mean_of([](SpcInputs const &r) { return std::optional{compute_spc(r).spc_average}; });
  }
  return out;
}

UtilizationRatios utilization_ratios(std::vector<SpcInputs> const &rows)
{
  PeriodAverages const means = period_averages(rows);
  if (!(means.regenerated_tons > 0.0))
  {
    throw Error(ErrorCode::undefined, "mean regenerated tonnage is zero");
  }
  if (!means.capacity_baseline_tons || !means.demand_baseline_tons)
  {
    throw Error(ErrorCode::incomplete_input, "utilization needs capacity and demand for every year");
  }
  return {*means.capacity_baseline_tons / means.regenerated_tons,
          *means.demand_baseline_tons / means.regenerated_tons};
}

}  // namespace circex
