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

#include "circex/baselines.hpp"

#include "circex/error.hpp"
#include "circex/numeric.hpp"

#include <cmath>

namespace circex {

namespace {

void require_finite(double value, char const *name)
{
  if (!std::isfinite(value))
  {
    throw Error(ErrorCode::domain, std::string{name} + " is not finite");
  }
}

}  // namespace

double neoclassical_social_cost(CostDecomposition const &d)
{
  require_finite(d.private_costs, "private_costs");
  require_finite(d.external_costs, "external_costs");
  if (d.external_costs < 0.0 && !d.compensating_externality)
  {
    throw Error(ErrorCode::domain,
                "negative external costs require the compensating-externality flag");
  }
  return d.private_costs + d.external_costs;
}

InstitutionalCost institutional_social_cost(CostDecomposition const &d)
{
  require_finite(d.private_costs, "private_costs");
  require_finite(d.social_opportunity_costs, "social_opportunity_costs");
  double const value = d.social_opportunity_costs - d.private_costs;
  return {value, value < 0.0};
}

char const *to_string(RecyclingBalance balance) noexcept
{
  switch (balance)
  {
  case RecyclingBalance::under_recycling:
    return "under_recycling";
  case RecyclingBalance::optimal:
    return "optimal";
  case RecyclingBalance::over_recycling:
    return "over_recycling";
  }
  return "unknown";
}

OptimalityGap recycling_optimality_gap(MarginalRecyclingCosts const &m, Tolerance tolerance)
{
  for (auto const &[value, name] : {std::pair{m.msc_r, "msc_r"}, std::pair{m.msc_v, "msc_v"},
                                   std::pair{m.msc_d, "msc_d"}})
  {
    require_finite(value, name);
    if (value < 0.0)
    {
      throw Error(ErrorCode::domain, std::string{name} + " must be non-negative");
    }
  }
  OptimalityGap result;
  result.gap = m.msc_r - m.msc_v - m.msc_d;
  if (approx_equal(m.msc_r, m.msc_v + m.msc_d, tolerance.relative))
  {
    result.balance = RecyclingBalance::optimal;
  }
  else
  {
    result.balance = result.gap < 0.0 ? RecyclingBalance::under_recycling
                                      : RecyclingBalance::over_recycling;
  }
  return result;
}

char const *to_string(PriceDiagnosis diagnosis) noexcept
{
  switch (diagnosis)
  {
  case PriceDiagnosis::efficient:
    return "efficient";
  case PriceDiagnosis::hidden_subsidy:
    return "hidden_subsidy";
  case PriceDiagnosis::uncovered_external_costs:
    return "uncovered_external_costs";
  case PriceDiagnosis::other:
    return "other";
  }
  return "unknown";
}

PriceAlignment price_alignment_diagnosis(PriceDiagnostics const &p, Tolerance tolerance)
{
  require_finite(p.price, "price");
  require_finite(p.marginal_private_cost, "marginal_private_cost");
  require_finite(p.marginal_social_cost, "marginal_social_cost");
  require_finite(p.willingness_to_pay, "willingness_to_pay");

  auto const eq = [&](double a, double b) { return approx_equal(a, b, tolerance.relative); };
  auto const lt = [&](double a, double b) { return a < b && !eq(a, b); };
  auto const ge = [&](double a, double b) { return a >= b || eq(a, b); };

  PriceAlignment result;
  result.wtp_covers_msc = ge(p.willingness_to_pay, p.marginal_social_cost);

  if (lt(p.price, p.marginal_private_cost))
  {
    result.diagnosis = PriceDiagnosis::hidden_subsidy;
  }
  else if (lt(p.marginal_private_cost, p.marginal_social_cost))
  {
    result.diagnosis = PriceDiagnosis::uncovered_external_costs;
  }
  else if (eq(p.price, p.marginal_private_cost) && eq(p.marginal_private_cost, p.marginal_social_cost) &&
           ge(p.willingness_to_pay, p.price))
  {
    result.diagnosis = PriceDiagnosis::efficient;
  }
  else
  {
    result.diagnosis = PriceDiagnosis::other;
  }
  return result;
}

}  // namespace circex
