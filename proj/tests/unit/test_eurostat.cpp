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
#include "circex/eurostat.hpp"

#include "error_code.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <thread>

namespace {

using namespace circex;
using circex::testing::error_code;
namespace fs = std::filesystem;

// Two countries by three years; geo is the slower-varying dimension.
std::string jsonstat_payload()
{
  nlohmann::json doc;
  doc["id"]   = {"freq", "unit", "geo", "time"};
  doc["size"] = {1, 1, 2, 3};
  doc["dimension"]["freq"]["category"]["index"] = {{"A", 0}};
  doc["dimension"]["unit"]["category"]["index"] = {{"KG_HAB", 0}};
  doc["dimension"]["geo"]["category"]["index"]  = {{"BG", 0}, {"EU27_2020", 1}};
  doc["dimension"]["time"]["category"]["index"] = {{"2016", 0}, {"2018", 1}, {"2020", 2}};
  doc["value"] = {{"0", 9000.5}, {"1", 8000}, {"3", 900}, {"4", 850}, {"5", 800}};
  return doc.dump();
}

class LocalServer
{
public:
  LocalServer()
  {
    server_.Get(R"(/data/(.+))", [this](httplib::Request const &req, httplib::Response &res) {
      ++hits_;
      last_path_ = req.path;
      last_oper_ = req.get_param_value("wst_oper");
      if (failures_left_ > 0)
      {
        --failures_left_;
        res.status = status_;
        return;
      }
      res.set_content(jsonstat_payload(), "application/json");
    });
    port_   = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~LocalServer()
  {
    server_.stop();
    thread_.join();
  }

  EndpointConfig endpoint(fs::path const &cache) const
  {
    EndpointConfig config;
    config.base_url        = "http://127.0.0.1:" + std::to_string(port_);
    config.path            = "/data/";
    config.cache_dir       = cache;
    config.retries         = 2;
    config.timeout_seconds = 5;
    return config;
  }

  void fail_next(int count, int status)
  {
    failures_left_ = count;
    status_        = status;
  }

  int hits() const
  {
    return hits_;
  }

  std::string last_path() const
  {
    return last_path_;
  }

  std::string last_oper() const
  {
    return last_oper_;
  }

private:
  httplib::Server  server_;
  std::thread      thread_;
  int              port_ = 0;
  std::atomic<int> hits_{0};
  std::atomic<int> failures_left_{0};
  std::atomic<int> status_{500};
  std::string      last_path_;
  std::string      last_oper_;
};

fs::path fresh_dir(std::string const &name)
{
  auto const dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

TEST(Catalog, KnownDatasets)
{
  EXPECT_EQ(find_dataset("env_wasgen").direction, Direction::higher_is_worse);
  EXPECT_EQ(find_dataset("env_wastrt").table, "env_wastrt");
  EXPECT_EQ(find_dataset("env_ac_rp").unit, IndicatorUnit::eur_per_kg);
  EXPECT_EQ(find_dataset("env_wastrt.recycling").direction, Direction::higher_is_better);
  EXPECT_EQ(error_code([] { find_dataset("env_nope"); }), ErrorCode::configuration);
}

TEST(Query, SortedAndEncoded)
{
  EndpointConfig config;
  auto const     query = build_query(find_dataset("env_wasgen"), {"EU27", "BG"}, {2010, 2020}, config);
  EXPECT_EQ(query.rfind(config.path + "env_wasgen?", 0), 0u) << query;
  EXPECT_LT(query.find("geo=BG"), query.find("geo=EU27_2020"));
  EXPECT_NE(query.find("sinceTimePeriod=2010"), std::string::npos);
  EXPECT_EQ(query, build_query(find_dataset("env_wasgen"), {"BG", "EU27"}, {2010, 2020}, config));
}

TEST(JsonStat, ParsesStridesAndMapsAggregates)
{
  auto const series = parse_jsonstat(find_dataset("env_wasgen"), jsonstat_payload());
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].country, "BG");
  EXPECT_EQ(series[0].points.size(), 2u);  // 2020 is missing
  EXPECT_EQ(series[0].points[0].value, 9000.5);
  EXPECT_EQ(series[1].country, "EU27");
  EXPECT_EQ(*series[1].value_at(2020), 800.0);
}

TEST(JsonStat, RejectsUnfilteredDimensions)
{
  auto doc = nlohmann::json::parse(jsonstat_payload());
  doc["size"][1] = 2;
  doc["dimension"]["unit"]["category"]["index"] = {{"KG_HAB", 0}, {"T", 1}};
  EXPECT_EQ(error_code([&] { parse_jsonstat(find_dataset("env_wasgen"), doc.dump()); }),
            ErrorCode::configuration);
  EXPECT_EQ(error_code([] { parse_jsonstat(find_dataset("env_wasgen"), "{not json"); }),
            ErrorCode::parse);
}

TEST(Fetch, DownloadsCachesAndServesOffline)
{
  LocalServer server;
  auto const  cache  = fresh_dir("circex_fetch_cache");
  auto        config = server.endpoint(cache);

  auto const first = fetch_indicator("env_wasgen", {"BG", "EU27"}, {2016, 2020}, config);
  EXPECT_EQ(server.hits(), 1);
  EXPECT_EQ(server.last_path(), "/data/env_wasgen");
  ASSERT_EQ(first.size(), 2u);

  config.offline    = true;
  auto const second = fetch_indicator("env_wasgen", {"BG", "EU27"}, {2016, 2020}, config);
  EXPECT_EQ(server.hits(), 1);
  EXPECT_EQ(first, second);

  // A different query is not in the cache.
  try
  {
    fetch_indicator("env_wasgen", {"RO"}, {2016, 2020}, config);
    FAIL();
  }
  catch (Error const &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::fetch);
    EXPECT_FALSE(e.retryable());
  }
  fs::remove_all(cache);
}

TEST(Fetch, RetriesTransientFailures)
{
  LocalServer server;
  auto const  config = server.endpoint({});
  server.fail_next(2, 503);
  EXPECT_EQ(fetch_indicator("env_wasgen", {"BG"}, {}, config).size(), 2u);
  EXPECT_EQ(server.hits(), 3);

  server.fail_next(5, 429);
  try
  {
    fetch_indicator("env_wasgen", {"BG"}, {}, config);
    FAIL();
  }
  catch (Error const &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::fetch);
    EXPECT_TRUE(e.retryable());
  }
}

TEST(Fetch, PermanentFailureIsNotRetried)
{
  LocalServer server;
  server.fail_next(1, 404);
  try
  {
    fetch_indicator("env_wasgen", {"BG"}, {}, server.endpoint({}));
    FAIL();
  }
  catch (Error const &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::fetch);
    EXPECT_FALSE(e.retryable());
  }
  EXPECT_EQ(server.hits(), 1);
}

TEST(Fetch, FilterOverridesReachTheQuery)
{
  LocalServer server;
  auto        config = server.endpoint({});
  fetch_indicator("env_wastrt", {"BG"}, {}, config);
  EXPECT_EQ(server.last_oper(), "DSP_L_OTH");
  config.filter_overrides["env_wastrt"]["wst_oper"] = "DSP_L";
  fetch_indicator("env_wastrt", {"BG"}, {}, config);
  EXPECT_EQ(server.last_oper(), "DSP_L");
}

TEST(Fetch, UnknownDatasetFailsBeforeNetwork)
{
  EndpointConfig config;
  config.base_url = "http://127.0.0.1:1";
  EXPECT_EQ(error_code([&] { fetch_indicator("nope", {"BG"}, {}, config); }),
            ErrorCode::configuration);
}

}  // namespace
