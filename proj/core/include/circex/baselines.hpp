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

// Neoclassical and institutional cost definitions and the market-failure
// diagnostics they support. Used as comparators for the transaction-cost
// model in spc_model.hpp.

namespace circex {

struct Tolerance
{
  double relative = 1e-9;
};

struct CostDecomposition
{
  double private_costs            = 0.0;
  double external_costs           = 0.0;
  double social_opportunity_costs = 0.0;
  /// Negative external costs are accepted only for compensating positive
  /// externalities.
  bool compensating_externality = false;
};

/// private + external. Throws domain error on non-finite components or an
/// unflagged negative externality.
double neoclassical_social_cost(CostDecomposition const &d);

struct InstitutionalCost
{
  double value    = 0.0;
  bool   negative = false;  // advisory: opportunity cost below private cost
};

/// social opportunity costs - private costs.
InstitutionalCost institutional_social_cost(CostDecomposition const &d);

struct MarginalRecyclingCosts
{
  double msc_r = 0.0;  // marginal social cost of recycling
  double msc_v = 0.0;  // marginal social cost of the virgin material
  double msc_d = 0.0;  // disposal of the virgin material after use
};

enum class RecyclingBalance
{
  under_recycling,  // primary resources are wasted
  optimal,
  over_recycling,
};

char const *to_string(RecyclingBalance balance) noexcept;

struct OptimalityGap
{
  double           gap = 0.0;  // msc_r - (msc_v + msc_d)
  RecyclingBalance balance = RecyclingBalance::optimal;
};

/// Recycling should grow until msc_r = msc_v + msc_d. Throws domain error on
/// a negative or non-finite component.
OptimalityGap recycling_optimality_gap(MarginalRecyclingCosts const &m, Tolerance tolerance = {});

struct PriceDiagnostics
{
  double price                 = 0.0;
  double marginal_private_cost = 0.0;
  double marginal_social_cost  = 0.0;
  double willingness_to_pay    = 0.0;
};

enum class PriceDiagnosis
{
  efficient,                 // WTP >= P = MPC = MSC
  hidden_subsidy,            // P < MPC
  uncovered_external_costs,  // P >= MPC and MSC > MPC
  other,
};

char const *to_string(PriceDiagnosis diagnosis) noexcept;

struct PriceAlignment
{
  PriceDiagnosis diagnosis      = PriceDiagnosis::other;
  bool           wtp_covers_msc = false;
};

/// Total over finite inputs: every input maps to exactly one diagnosis.
PriceAlignment price_alignment_diagnosis(PriceDiagnostics const &p, Tolerance tolerance = {});

}  // namespace circex
