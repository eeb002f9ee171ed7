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

// Acceptance suite. Prints one PASS, FAIL or SKIP line per criterion and
// exits non-zero when any criterion fails.

#include "circex/baselines.hpp"
#include "circex/compare.hpp"
#include "circex/error.hpp"
#include "circex/eurostat.hpp"
#include "circex/report.hpp"
#include "circex/spc_model.hpp"
#include "circex/stats.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace circex;
namespace fs = std::filesystem;

fs::path const kUsedOils = CIRCEX_TEST_DATA_DIR "/used_oils_bg";

enum class Verdict
{
  pass,
  fail,
  skip,
};

struct Outcome
{
  Verdict     verdict = Verdict::pass;
  std::string detail;
};

// Collects the first failed expectation of a criterion.
class Checker
{
public:
  void expect(bool condition, std::string const &what)
  {
    if (!condition && ok_)
    {
      ok_     = false;
      detail_ = what;
    }
  }

  void near(double actual, double expected, double tolerance, std::string const &what)
  {
    std::ostringstream msg;
    msg.precision(12);
    msg << what << ": got " << actual << ", want " << expected << " +/- " << tolerance;
    expect(std::fabs(actual - expected) <= tolerance, msg.str());
  }

  Outcome outcome(std::string const &summary) const
  {
    return ok_ ? Outcome{Verdict::pass, summary} : Outcome{Verdict::fail, detail_};
  }

private:
  bool        ok_ = true;
  std::string detail_;
};

std::string slurp(fs::path const &path)
{
  std::ifstream      in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<AnnualAggregate> used_oils_registry()
{
  return parse_registry(slurp(kUsedOils / "registry.csv"));
}

std::vector<SpcInputs> used_oils_inputs()
{
  return assemble_spc_inputs(used_oils_registry(),
                             parse_capacity_table(slurp(kUsedOils / "capacity.csv")),
                             parse_demand_table(slurp(kUsedOils / "demand.csv")));
}

std::vector<double> const kYears{2016, 2017, 2018, 2019, 2021};

std::vector<double> used_oils_magnitudes()
{
  std::vector<double> out;
  for (auto const &in : used_oils_inputs())
  {
    out.push_back(compute_spc(in).magnitude);
  }
  return out;
}

Outcome reconciliation()
{
  Checker                           c;
  auto const                        years = used_oils_registry();
  std::map<int, std::pair<double, double>> const printed{{2016, {31223.806, 12507.316}},
                                                         {2017, {31716.751, 12714.481}},
                                                         {2018, {32792.914, 13141.169}},
                                                         {2019, {32710.799, 13211.171}},
                                                         {2021, {30231.596, 12174.115}}};
  c.expect(years.size() == printed.size(), "expected five registry years");
  for (auto const &aggregate : years)
  {
    auto const label = std::to_string(aggregate.year);
    auto const it    = printed.find(aggregate.year);
    c.expect(it != printed.end(), "unexpected year " + label);
    if (it == printed.end())
    {
      continue;
    }
    double released    = 0.0;
    double regenerated = 0.0;
    for (auto const &r : aggregate.records)
    {
      released += r.released_tons;
      regenerated += r.regenerated_tons;
    }
    c.near(released, it->second.first, 0.001, label + " released");
    c.near(regenerated, it->second.second, 0.001, label + " regenerated");
    c.expect(validate_annual_totals(aggregate).pass(), label + " fails totals validation");
  }
  return c.outcome("5 years reconcile to +/-0.001 t");
}

Outcome spc_column()
{
  Checker      c;
  double const expected[] = {-79992.684, -79785.519, -81033.831, -80963.829, -82000.885};
  auto const   inputs     = used_oils_inputs();
  c.expect(inputs.size() == 5, "expected five model years");
  for (std::size_t i = 0; i < std::min<std::size_t>(5, inputs.size()); ++i)
  {
    c.near(compute_spc(inputs[i]).spc_average, expected[i], 0.001,
           "SPC " + std::to_string(inputs[i].year));
  }
  return c.outcome("SPC averages match to +/-0.001");
}

Outcome period()
{
  Checker    c;
  auto const p = period_averages(used_oils_inputs());
  c.near(p.released_tons.value_or(NAN), 31735.173, 0.001, "released mean");
  c.near(p.regenerated_tons, 12749.650, 0.001, "regenerated mean");
  c.near(p.capacity_baseline_tons.value_or(NAN), 57010.0, 0.001, "capacity mean");
  return c.outcome("31735.173 / 12749.650 / 57010");
}

Outcome utilization()
{
  Checker    c;
  auto const u = utilization_ratios(used_oils_inputs());
  c.expect(u.capacity_to_regenerated > 4.0, "capacity ratio not above 4");
  c.expect(u.demand_to_regenerated > 10.0, "demand ratio not above 10");
  c.near(u.capacity_to_regenerated, 4.47, 0.005, "capacity ratio");
  c.near(u.demand_to_regenerated, 10.20, 0.005, "demand ratio");
  std::ostringstream s;
  s.precision(4);
  s << "capacity/regenerated " << u.capacity_to_regenerated << ", demand/regenerated "
    << u.demand_to_regenerated;
  return c.outcome(s.str());
}

Outcome rank_correlations()
{
  Checker    c;
  auto const y = used_oils_magnitudes();
  double const tau = kendall_tau(kYears, y).coefficient;
  double const rho = spearman_rho(kYears, y).coefficient;
  c.expect(tau == 0.6, "Kendall is " + std::to_string(tau));
  c.expect(rho == 0.8, "Spearman is " + std::to_string(rho));
  c.expect(tau == oracle::kendall(kYears, y), "Kendall differs from pair-count oracle");
  c.expect(rho == oracle::spearman(kYears, y), "Spearman differs from rank-count oracle");
  return c.outcome("Kendall 0.6, Spearman 0.8");
}

Outcome fisher()
{
  Checker    c;
  auto const ci = fisher_interval(-0.6163201, 5, 0.95);
  c.near(ci.low, -0.9707389, 1e-4, "lower bound");
  c.near(ci.high, 0.5829070, 1e-4, "upper bound");
  std::ostringstream s;
  s.precision(7);
  s << "(" << ci.low << ", " << ci.high << ")";
  return c.outcome(s.str());
}

Outcome significance()
{
  Checker      c;
  double const p = correlation_significance(-0.6163201, 5);
  c.expect(p >= 0.20 && p <= 0.32, "p outside [0.20, 0.32]: " + std::to_string(p));
  c.near(p, oracle::correlation_p(-0.6163201, 5), 1e-6, "p vs quadrature oracle");
  return c.outcome("p = " + std::to_string(p));
}

Outcome non_reproducibility()
{
  Checker    c;
  auto const outcome = run_analysis(load_config_file(kUsedOils / "circex.conf"));
  auto const &r      = outcome.report;
  c.expect(outcome.exit_code == exit_code::success, "run failed: " + r.error.value_or("?"));
  auto const noted = [&](std::string const &q) {
    return std::any_of(r.discrepancies.begin(), r.discrepancies.end(),
                       [&](auto const &d) { return d.quantity == q; });
  };
  c.expect(noted("spc.mean"), "no discrepancy note for the published mean");
  c.expect(noted("spc.pearson"), "no discrepancy note for the published Pearson coefficient");
  c.expect(r.stats.has_value() && r.stats->summary.has_value(), "no statistics in report");
  if (r.stats && r.stats->summary)
  {
    auto const &y = r.stats->series.y;
    c.near(r.stats->summary->mean, static_cast<double>(oracle::moments(y).mean), 1e-9,
           "mean vs oracle");
    c.near(r.stats->summary->mean, 80755.350, 0.001, "mean");
    // Magnitudes carry three decimals, so a thousandfold scale makes them
    // integers for the exact product-moment oracle.
    std::vector<oracle::wide> xi;
    std::vector<oracle::wide> yi;
    for (std::size_t i = 0; i < y.size(); ++i)
    {
      xi.push_back(static_cast<oracle::wide>(r.stats->series.x[i]));
      yi.push_back(static_cast<oracle::wide>(std::llround(y[i] * 1000.0)));
    }
    double const pearson = r.stats->correlations.front().coefficient;
    c.near(pearson, oracle::product_moment(xi, yi), 1e-12, "Pearson vs oracle");
    c.near(pearson, 0.9366, 1e-4, "Pearson");
  }
  return c.outcome("published mean 68005.7 and Pearson 0.7963749 flagged; derived 80755.350 and " +
                   std::to_string(r.stats ? r.stats->correlations.front().coefficient : NAN) +
                   " asserted");
}

Outcome oracle_equivalence()
{
  Checker     c;
  std::size_t compared = 0;
  auto const  check    = [&](std::vector<double> const &x, std::vector<double> const &y,
                         int scale_bits) {
    ++compared;
    c.expect(kendall_tau(x, y).coefficient == oracle::kendall(x, y), "Kendall mismatch");
    if (x.size() >= 3)
    {
      c.expect(spearman_rho(x, y).coefficient == oracle::spearman(x, y), "Spearman mismatch");
      c.expect(pearson(x, y).coefficient == oracle::pearson_dyadic(x, y, scale_bits),
               "Pearson mismatch");
    }
  };

  for (std::size_t n = 2; n <= 6; ++n)
  {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 1.0);
    std::vector<double> y = x;
    do
    {
      check(x, y, 0);
    } while (std::next_permutation(y.begin(), y.end()));
  }

  std::mt19937_64                    rng(20240611);
  std::uniform_int_distribution<int> length(2, 12);
  std::uniform_int_distribution<int> sixteenths(-1600, 1600);
  int                                random_series = 0;
  while (random_series < 1000)
  {
    auto const          n      = static_cast<std::size_t>(length(rng));
    int const           spread = 2 + random_series % 64;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      x[i] = (sixteenths(rng) % spread) / 16.0;
      y[i] = (sixteenths(rng) % spread) / 16.0;
    }
    auto const constant = [](std::vector<double> const &v) {
      return std::all_of(v.begin(), v.end(), [&](double d) { return d == v[0]; });
    };
    if (constant(x) || constant(y))
    {
      continue;
    }
    check(x, y, 4);
    ++random_series;
  }
  return c.outcome(std::to_string(compared) + " series, bit-identical to brute-force oracles");
}

Outcome decomposition()
{
  Checker                                c;
  std::mt19937_64                        rng(8);
  std::uniform_real_distribution<double> amount(0.0, 1e7);
  std::uniform_int_distribution<int>     category(0, 6);
  for (int trial = 0; trial < 1000; ++trial)
  {
    CostLedger ledger{2016, "EUR", {}};
    for (int i = 0; i < 1 + trial % 30; ++i)
    {
      ledger.entries.push_back({static_cast<CostCategory>(category(rng)), amount(rng)});
    }
    auto const t = compute_trc(ledger);
    c.expect(t.fixed == t.administrative + t.market, "fixed != administrative + market");
    c.expect(t.variable == t.performance + t.alternative, "variable != performance + alternative");
    c.expect(t.total == t.fixed + t.variable, "total != fixed + variable");
    std::shuffle(ledger.entries.begin(), ledger.entries.end(), rng);
    c.expect(compute_trc(ledger).total == t.total, "total depends on entry order");

    SpcInputs in;
    in.regenerated_with_systems_tons = amount(rng) / 50.0;
    in.capacity_baseline_tons        = amount(rng) / 50.0;
    in.demand_baseline_tons          = amount(rng) / 50.0;
    auto const s     = compute_spc(in);
    double const lhs = s.spc_average;
    double const rhs = (s.spc_capacity + s.spc_demand) / 2.0;
    c.expect(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(lhs)), "SPC average identity");

    BalanceOptions options;
    options.conversion_rate = 1.0 + amount(rng) / 1e6;
    if (t.total > 0.0 && s.magnitude > 0.0)
    {
      auto const b = balance(s, t, options);
      c.expect(b.ratio && b.log_residual, "balance lacks ratio or log residual");
      if (b.ratio && b.log_residual)
      {
        c.expect(std::fabs(std::exp(*b.log_residual) - *b.ratio) <= 1e-12 * *b.ratio,
                 "ratio and log residual disagree");
        c.expect(b.holds == (std::fabs(std::log(*b.ratio)) <= options.tolerance),
                 "holds flag disagrees with ratio");
      }
    }
  }
  SpcResult spc;
  spc.spc_average = -250.0;
  spc.magnitude   = 250.0;
  TrcResult trc;
  trc.total = 1000.0;
  BalanceOptions exact;
  exact.conversion_rate = 4.0;
  auto const b          = balance(spc, trc, exact);
  c.expect(b.ratio == 1.0 && b.log_residual == 0.0 && b.holds, "exact balance not detected");
  return c.outcome("1000 ledgers and inputs; ratio/log agree to 1e-12");
}

Outcome baselines()
{
  Checker c;
  c.expect(recycling_optimality_gap({30.0, 20.0, 10.0}).balance == RecyclingBalance::optimal,
           "equality fixture not optimal");
  c.expect(price_alignment_diagnosis({10.0, 10.0, 10.0, 12.0}).diagnosis == PriceDiagnosis::efficient,
           "equality fixture not efficient");
  c.expect(price_alignment_diagnosis({8.0, 10.0, 12.0, 9.0}).diagnosis ==
               PriceDiagnosis::hidden_subsidy,
           "hidden subsidy fixture misclassified");
  c.expect(price_alignment_diagnosis({10.0, 10.0, 14.0, 11.0}).diagnosis ==
               PriceDiagnosis::uncovered_external_costs,
           "uncovered externality fixture misclassified");
  return c.outcome("equality, hidden subsidy and uncovered externality classified");
}

Outcome indicator_claims()
{
  std::vector<std::string> const datasets{"env_wastrt", "env_wasgen", "env_ac_rp"};
  std::vector<IndicatorSeries>   series;
  try
  {
    if (char const *file = std::getenv("CIRCEX_INDICATORS"); file && *file)
    {
      series = parse_indicator_table(slurp(file));
    }
    else if (char const *fetch = std::getenv("CIRCEX_FETCH"); fetch && std::string{fetch} == "1")
    {
      EndpointConfig endpoint;
      if (char const *cache = std::getenv("CIRCEX_CACHE_DIR"))
      {
        endpoint.cache_dir = cache;
      }
      for (auto const &id : datasets)
      {
        auto part = fetch_indicator(id, {"BG", "EU27", "RO"}, {}, endpoint);
        series.insert(series.end(), part.begin(), part.end());
      }
    }
    else
    {
      return {Verdict::skip, "offline; set CIRCEX_INDICATORS or CIRCEX_FETCH=1"};
    }
  }
  catch (Error const &e)
  {
    if (e.code() == ErrorCode::fetch)
    {
      return {Verdict::skip, std::string{"statistics endpoint unreachable: "} + e.what()};
    }
    return {Verdict::fail, e.what()};
  }

  auto const find = [&](std::string const &dataset, std::string const &country) {
    auto it = std::find_if(series.begin(), series.end(), [&](auto const &s) {
      return s.dataset == dataset && s.country == country;
    });
    if (it == series.end())
    {
      throw Error(ErrorCode::incomplete_input, "no " + dataset + " series for " + country);
    }
    return *it;
  };
  Checker c;
  try
  {
    double const disposal     = pairwise_ratio(find("env_wastrt", "BG"), find("env_wastrt", "EU27")).ratio;
    double const generation   = pairwise_ratio(find("env_wasgen", "BG"), find("env_wasgen", "RO")).ratio;
    double const productivity = pairwise_ratio(find("env_ac_rp", "BG"), find("env_ac_rp", "EU27")).ratio;
    c.expect(disposal >= 8.0, "BG/EU27 disposal " + std::to_string(disposal) + " < 8");
    c.expect(generation >= 2.0, "BG/RO generation " + std::to_string(generation) + " < 2");
    c.expect(productivity <= 0.2, "BG/EU27 productivity " + std::to_string(productivity) + " > 1/5");
    return c.outcome("disposal x" + std::to_string(disposal) + ", generation x" +
                     std::to_string(generation) + ", productivity x" + std::to_string(productivity));
  }
  catch (Error const &e)
  {
    return {Verdict::fail, e.what()};
  }
}

}  // namespace

int main()
{
  std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria{
      {"registry totals reconcile", reconciliation},
      {"SPC column reproduced", spc_column},
      {"period averages", period},
      {"utilization ratios", utilization},
      {"rank correlations", rank_correlations},
      {"Fisher interval", fisher},
      {"significance", significance},
      {"published statistics flagged", non_reproducibility},
      {"oracle equivalence", oracle_equivalence},
      {"decomposition properties", decomposition},
      {"baseline classification", baselines},
      {"indicator ratio claims", indicator_claims},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i)
  {
    Outcome outcome;
    try
    {
      outcome = criteria[i].second();
    }
    catch (std::exception const &e)
    {
      outcome = {Verdict::fail, std::string{"unexpected exception: "} + e.what()};
    }
    char const *label = outcome.verdict == Verdict::pass ? "PASS"
                        : outcome.verdict == Verdict::fail ? "FAIL"
                                                           : "SKIP";
    failures += outcome.verdict == Verdict::fail ? 1 : 0;
    std::cout << label << "  " << (i + 1) << ". " << criteria[i].first << ": " << outcome.detail
              << '\n';
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
