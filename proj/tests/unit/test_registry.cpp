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

#include "circex/error.hpp"
#include "circex/registry.hpp"

#include "csv.hpp"
#include "error_code.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

namespace {

using namespace circex;
using circex::testing::error_code;

std::string const kHeader =
    "year,organization,released_tons,regenerated_tons,processor,route_tons,route_kind\n";

std::string used_oils_registry()
{
  return detail::read_file(CIRCEX_TEST_DATA_DIR "/used_oils_bg/registry.csv");
}

TEST(Registry, PublishedTotalsReconcile)
{
  auto const years = parse_registry(used_oils_registry());
  ASSERT_EQ(years.size(), 5u);
  for (auto const &aggregate : years)
  {
    auto const delta = validate_annual_totals(aggregate);
    EXPECT_TRUE(delta.pass()) << aggregate.year;
    EXPECT_NEAR(delta.released_delta, 0.0, 0.001);
    EXPECT_NEAR(delta.regenerated_delta, 0.0, 0.001);
  }
  EXPECT_EQ(years[0].year, 2016);
  EXPECT_EQ(years[0].total_released_tons, 31223.806);
  EXPECT_EQ(years[0].total_regenerated_tons, 12507.316);
  EXPECT_EQ(years[4].year, 2021);
}

TEST(Registry, MultiRowRoutesCollapseToOneRecord)
{
  auto const years = parse_registry(used_oils_registry());
  auto const &y2016 = years[0];
  ASSERT_EQ(y2016.records.size(), 5u);
  auto const &nord = y2016.records[4];
  EXPECT_EQ(nord.routes.size(), 3u);
  EXPECT_EQ(nord.routes[2].kind, RouteKind::recovery_only);
  EXPECT_NEAR(nord.routed_regeneration_tons(), 1746.49, 1e-9);
}

TEST(Registry, SingleTableParser)
{
  std::string const text = kHeader + "2020,A,10,4,P,4,regeneration\n2020,Total:,10,4,,,\n";
  auto const        aggregate = parse_registry_table(text);
  EXPECT_EQ(aggregate.year, 2020);
  EXPECT_EQ(aggregate.records.size(), 1u);
  EXPECT_EQ(error_code([&] { parse_registry_table(text + "2021,A,1,1,,,\n2021,TOTAL,1,1,,,\n"); }),
            ErrorCode::parse);
}

TEST(Registry, MismatchedTotalFailsValidation)
{
  auto const aggregate =
      parse_registry_table(kHeader + "2020,A,10,4,,,\n2020,B,5,1,,,\n2020,TOTAL,15.002,5,,,\n");
  auto const delta = validate_annual_totals(aggregate);
  EXPECT_FALSE(delta.pass());
  EXPECT_FALSE(delta.released_ok);
  EXPECT_TRUE(delta.regenerated_ok);
  EXPECT_NEAR(delta.released_delta, -0.002, 1e-9);
}

TEST(Registry, ToleranceBoundaryIsInclusive)
{
  auto const aggregate = parse_registry_table(kHeader + "2020,A,10,4,,,\n2020,TOTAL,10.001,4,,,\n");
  EXPECT_TRUE(validate_annual_totals(aggregate).pass());
}

TEST(Registry, Errors)
{
  struct Case
  {
    std::string body;
    ErrorCode   code;
  };
  std::vector<Case> const cases{
      {"", ErrorCode::empty_dataset},
      {"2020,A,10,4,,,\n", ErrorCode::parse},
      {"2020,TOTAL,10,4,,,\n", ErrorCode::empty_dataset},
      {"2020,A,ten,4,,,\n2020,TOTAL,10,4,,,\n", ErrorCode::parse},
      {"2020,A,-1,0,,,\n2020,TOTAL,0,0,,,\n", ErrorCode::invariant},
      {"2020,A,10,4,P,4,burned\n2020,TOTAL,10,4,,,\n", ErrorCode::schema},
      {"2020,A,10,4,P,5,regeneration\n2020,TOTAL,10,4,,,\n", ErrorCode::invariant},
      {"2020,A,10,4,,,\n2020,B,1,1,,,\n2020,A,10,4,,,\n2020,TOTAL,11,5,,,\n", ErrorCode::duplicate_key},
      {"2020,A,10,4,P,2,regeneration\n2020,A,11,4,Q,2,regeneration\n2020,TOTAL,10,4,,,\n",
       ErrorCode::duplicate_key},
      {"2020,A,10,4,,,\n2020,TOTAL,10,4,,,\n2020,TOTAL,10,4,,,\n", ErrorCode::duplicate_key},
  };
  for (auto const &c : cases)
  {
    EXPECT_EQ(error_code([&] { parse_registry(kHeader + c.body); }), c.code) << c.body;
  }
  EXPECT_EQ(error_code([] { parse_registry("year,organization\n2020,A\n"); }), ErrorCode::schema);
}

TEST(Registry, ErrorsNameLineAndColumn)
{
  try
  {
    parse_registry(kHeader + "2020,A,10,x,,,\n2020,TOTAL,10,4,,,\n");
    FAIL();
  }
  catch (Error const &e)
  {
    std::string const what = e.what();
    EXPECT_NE(what.find("line 2"), std::string::npos) << what;
    EXPECT_NE(what.find("regenerated_tons"), std::string::npos) << what;
  }
}

TEST(Registry, RecoveryOnlyRoutesNeverCountAsRegenerated)
{
  auto const aggregate = parse_registry_table(
      kHeader + "2020,A,10,4,P,4,regeneration\n2020,A,10,4,Q,100,recovery_only\n2020,TOTAL,10,4,,,\n");
  EXPECT_EQ(aggregate.records[0].routed_regeneration_tons(), 4.0);
}

TEST(Registry, SerializeRoundTrip)
{
  auto const years = parse_registry(used_oils_registry());
  EXPECT_EQ(parse_registry(serialize_registry(years)), years);
}

TEST(Registry, RandomRoundTripAndPerturbation)
{
  std::mt19937                       rng(3);
  std::uniform_int_distribution<int> thousandths(0, 9'999'999);
  for (int trial = 0; trial < 200; ++trial)
  {
    AnnualAggregate aggregate;
    aggregate.year = 2000 + trial % 30;
    long long released = 0;
    long long regenerated = 0;
    int const orgs = 1 + trial % 6;
    for (int i = 0; i < orgs; ++i)
    {
      long long const r = thousandths(rng);
      long long const g = r / 2;
      released += r;
      regenerated += g;
      OrganizationRecord record{aggregate.year, "org " + std::to_string(i), r / 1000.0, g / 1000.0, {}};
      if (i % 2 == 0)
      {
        record.routes.push_back(Route{"plant, \"x\"", g / 1000.0, RouteKind::regeneration});
        record.routes.push_back(Route{"kiln", r / 1000.0, RouteKind::recovery_only});
      }
      aggregate.records.push_back(record);
    }
    aggregate.total_released_tons    = released / 1000.0;
    aggregate.total_regenerated_tons = regenerated / 1000.0;

    auto const parsed = parse_registry(serialize_registry({aggregate}));
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0], aggregate);
    EXPECT_TRUE(validate_annual_totals(parsed[0]).pass());

    // Moving one printed total by more than the tolerance must fail.
    auto perturbed = aggregate;
    perturbed.total_released_tons += (trial % 2 ? 1 : -1) * 0.0015;
    EXPECT_FALSE(validate_annual_totals(perturbed).pass());
  }
}

TEST(Capacity, UsedOilTotals)
{
  auto const records =
      parse_capacity_table(detail::read_file(CIRCEX_TEST_DATA_DIR "/used_oils_bg/capacity.csv"));
  auto const by_year = capacity_by_year(records);
  EXPECT_EQ(by_year.at(2016), 55000.0);
  EXPECT_EQ(by_year.at(2017), 55000.0);
  EXPECT_EQ(by_year.at(2018), 58350.0);
  EXPECT_EQ(by_year.at(2021), 58350.0);
}

TEST(Capacity, Errors)
{
  std::string const header = "year,processor,licensed_capacity_tons_per_year,license_id\n";
  EXPECT_EQ(error_code([&] { parse_capacity_table(header); }), ErrorCode::empty_dataset);
  EXPECT_EQ(error_code([&] { parse_capacity_table(header + "2016,P,10,L\n2016,P,10,L\n"); }),
            ErrorCode::duplicate_key);
  EXPECT_EQ(error_code([&] { parse_capacity_table(header + "2016,P,-10,L\n"); }),
            ErrorCode::invariant);
}

TEST(Demand, ParseAndDuplicates)
{
  std::string const header = "year,demand_tons,source\n";
  auto const        demand = parse_demand_table(header + "2016,130000,market\n");
  ASSERT_EQ(demand.size(), 1u);
  EXPECT_EQ(demand[0].demand_tons, 130000.0);
  EXPECT_EQ(error_code([&] { parse_demand_table(header + "2016,1,a\n2016,2,b\n"); }),
            ErrorCode::duplicate_key);
}

TEST(Ledger, CategoriesAndAliases)
{
  auto const ledgers = parse_ledger_table("year,category,amount\n"
                                          "2016,bank_guarantee,10\n"
                                          "2016,admin_audit,5\n"
                                          "2016,performance,7\n"
                                          "2017,alternative,1\n");
  ASSERT_EQ(ledgers.size(), 2u);
  EXPECT_EQ(ledgers[0].year, 2016);
  EXPECT_EQ(ledgers[0].monetary_unit, "EUR");
  EXPECT_EQ(ledgers[0].entries.size(), 3u);
  EXPECT_EQ(ledgers[0].entries[0].category, CostCategory::admin_bank_guarantee);
}

TEST(Ledger, NegativeAmountsNeedFlag)
{
  std::string const text = "year,category,amount\n2016,audit,-3\n";
  EXPECT_EQ(error_code([&] { parse_ledger_table(text); }), ErrorCode::invariant);
  LedgerOptions options;
  options.allow_negative = true;
  EXPECT_EQ(parse_ledger_table(text, options)[0].entries[0].amount, -3.0);
  EXPECT_EQ(error_code([] { parse_ledger_table("year,category,amount\n2016,bribes,3\n"); }),
            ErrorCode::schema);
}

TEST(Indicators, ParseSortsAndRoundTrips)
{
  auto const series = parse_indicator_table("dataset,country,year,value,unit\n"
                                            "env_wasgen,BG,2018,3000,kg_per_capita\n"
                                            "env_wasgen,BG,2016,2900,kg_per_capita\n"
                                            "env_ac_rp,EU27,2016,2.1,eur_per_kg\n");
  ASSERT_EQ(series.size(), 2u);
  for (auto const &s : series)
  {
    for (std::size_t i = 1; i < s.points.size(); ++i)
    {
      EXPECT_LT(s.points[i - 1].year, s.points[i].year);
    }
  }
  EXPECT_EQ(parse_indicator_table(serialize_indicator_table(series)), series);
}

TEST(Indicators, Errors)
{
  std::string const header = "dataset,country,year,value,unit\n";
  EXPECT_EQ(error_code([&] {
              parse_indicator_table(header + "d,BG,2016,1,kg_per_capita\nd,BG,2016,2,kg_per_capita\n");
            }),
            ErrorCode::duplicate_point);
  EXPECT_EQ(error_code([&] { parse_indicator_table(header + "d,BG,2016,1,tons\n"); }),
            ErrorCode::schema);
  EXPECT_EQ(error_code([&] {
              parse_indicator_table(header + "d,BG,2016,1,kg_per_capita\nd,BG,2017,1,eur_per_kg\n");
            }),
            ErrorCode::schema);
  EXPECT_EQ(error_code([&] { parse_indicator_table(header + "d,BG,2016,-1,kg_per_capita\n"); }),
            ErrorCode::invariant);
}

}  // namespace
