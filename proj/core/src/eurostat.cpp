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

#include "circex/eurostat.hpp"

#include "circex/error.hpp"
#include "csv.hpp"
#include "digest.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <map>
#include <utility>

namespace circex {

namespace {

using json = nlohmann::json;

std::vector<DatasetSpec> make_catalog()
{
  std::map<std::string, std::string> const waste_total{
      {"unit", "KG_HAB"}, {"waste", "TOTAL"}, {"hazard", "HAZ_NHAZ"}, {"freq", "A"}};

  auto treatment = [&](std::string id, std::string title, std::string operation, Direction dir) {
    DatasetSpec spec{std::move(id), "env_wastrt", std::move(title), IndicatorUnit::kg_per_capita,
                     dir, waste_total};
    spec.filters["wst_oper"] = std::move(operation);
    return spec;
  };

  DatasetSpec generation{"env_wasgen", "env_wasgen", "Generated waste",
                         IndicatorUnit::kg_per_capita, Direction::higher_is_worse, waste_total};
  generation.filters["nace_r2"] = "TOTAL_HH";

  DatasetSpec productivity{"env_ac_rp",
                           "env_ac_rp",
                           "Resource productivity",
                           IndicatorUnit::eur_per_kg,
                           Direction::higher_is_better,
                           {{"unit", "EUR_KG_CLV15"}, {"freq", "A"}}};

  return {
      generation,
      treatment("env_wastrt", "Waste disposal (landfill and other)", "DSP_L_OTH",
                Direction::higher_is_worse),
      treatment("env_wastrt.energy_recovery", "Energy recovery from waste", "RCV_E",
                Direction::higher_is_better),
      treatment("env_wastrt.recycling", "Recycling and backfilling", "RCV_R_B",
                Direction::higher_is_better),
      productivity,
  };
}

std::string percent_encode(std::string_view text)
{
  constexpr char hex[] = "0123456789ABCDEF";
  std::string    out;
  for (unsigned char c : text)
  {
    bool const plain = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                       c == '-' || c == '_' || c == '.' || c == '~';
    if (plain)
    {
      out.push_back(static_cast<char>(c));
    }
    else
    {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0x0F]);
    }
  }
  return out;
}

// JSON-stat category index: either {"code": position} or ["code", ...].
std::vector<std::string> category_codes(json const &dimension, std::size_t size)
{
  std::vector<std::string> codes(size);
  json const              &index = dimension.at("category").at("index");
  if (index.is_array())
  {
    for (std::size_t i = 0; i < index.size() && i < size; ++i)
    {
      codes[i] = index[i].get<std::string>();
    }
  }
  else
  {
    for (auto const &[code, position] : index.items())
    {
      auto const pos = position.get<std::size_t>();
      if (pos >= size)
      {
        throw Error(ErrorCode::parse, "category position out of range for '" + code + "'");
      }
      codes[pos] = code;
    }
  }
  return codes;
}

int parse_time_code(std::string const &code)
{
  int value            = 0;
  auto const [end, ec] = std::from_chars(code.data(), code.data() + code.size(), value);
  if (ec != std::errc{} || end != code.data() + code.size())
  {
    throw Error(ErrorCode::parse, "non-annual time period '" + code + "'");
  }
  return value;
}

DatasetSpec with_overrides(DatasetSpec spec, EndpointConfig const &config)
{
  if (auto const it = config.filter_overrides.find(spec.id); it != config.filter_overrides.end())
  {
    for (auto const &[dimension, code] : it->second)
    {
      spec.filters[dimension] = code;
    }
  }
  return spec;
}

}  // namespace

std::vector<DatasetSpec> const &dataset_catalog()
{
  static std::vector<DatasetSpec> const catalog = make_catalog();
  return catalog;
}

DatasetSpec const &find_dataset(std::string_view id)
{
  for (auto const &spec : dataset_catalog())
  {
    if (spec.id == id)
    {
      return spec;
    }
  }
  throw Error(ErrorCode::configuration, "unknown dataset '" + std::string{id} + "'");
}

std::string to_eurostat_geo(std::string_view country)
{
  if (country == "EU27")
  {
    return "EU27_2020";
  }
  return std::string{country};
}

std::string from_eurostat_geo(std::string_view geo)
{
  if (geo == "EU27_2020")
  {
    return "EU27";
  }
  return std::string{geo};
}

std::string build_query(DatasetSpec const &spec, std::vector<std::string> const &countries,
                        YearRange years, EndpointConfig const &config)
{
  std::vector<std::pair<std::string, std::string>> params{
      {"format", "JSON"},
      {"lang", "EN"},
      {"sinceTimePeriod", std::to_string(years.first)},
      {"untilTimePeriod", std::to_string(years.last)},
  };
  for (auto const &[dimension, code] : spec.filters)
  {
    params.emplace_back(dimension, code);
  }
  for (auto const &country : countries)
  {
    params.emplace_back("geo", to_eurostat_geo(country));
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());

  std::string query = config.path + percent_encode(spec.table) + "?";
  for (std::size_t i = 0; i < params.size(); ++i)
  {
    if (i > 0)
    {
      query += '&';
    }
    query += percent_encode(params[i].first) + "=" + percent_encode(params[i].second);
  }
  return query;
}

std::filesystem::path cache_path(EndpointConfig const &config, std::string_view dataset_id,
                                 std::string_view query)
{
  std::string name{dataset_id};
  std::replace(name.begin(), name.end(), '/', '_');
  return config.cache_dir / (name + "-" + detail::sha256_hex(query).substr(0, 16) + ".json");
}

std::vector<IndicatorSeries> parse_jsonstat(DatasetSpec const &spec, std::string_view payload)
{
  json document;
  try
  {
    document = json::parse(payload);
  }
  catch (json::parse_error const &e)
  {
    throw Error(ErrorCode::parse, std::string{"JSON-stat payload: "} + e.what());
  }

  std::map<std::string, std::vector<IndicatorPoint>> by_country;
  try
  {
    auto const ids   = document.at("id").get<std::vector<std::string>>();
    auto const sizes = document.at("size").get<std::vector<std::size_t>>();
    if (ids.size() != sizes.size())
    {
      throw Error(ErrorCode::parse, "JSON-stat id/size length mismatch");
    }

    std::optional<std::size_t>            geo_dim;
    std::optional<std::size_t>            time_dim;
    std::vector<std::vector<std::string>> codes(ids.size());
    for (std::size_t d = 0; d < ids.size(); ++d)
    {
      codes[d] = category_codes(document.at("dimension").at(ids[d]), sizes[d]);
      if (ids[d] == "geo")
      {
        geo_dim = d;
      }
      else if (ids[d] == "time")
      {
        time_dim = d;
      }
      else if (sizes[d] > 1)
      {
        throw Error(ErrorCode::configuration, "dataset " + spec.id + ": dimension '" + ids[d] +
                                                  "' not filtered to one category");
      }
    }
    if (!geo_dim || !time_dim)
    {
      throw Error(ErrorCode::parse, "JSON-stat payload lacks geo or time dimension");
    }

    std::vector<std::size_t> strides(ids.size(), 1);
    for (std::size_t d = ids.size(); d-- > 1;)
    {
      strides[d - 1] = strides[d] * sizes[d];
    }

    auto const add = [&](std::size_t flat, json const &value) {
      if (value.is_null())
      {
        return;
      }
      std::size_t const geo_pos  = (flat / strides[*geo_dim]) % sizes[*geo_dim];
      std::size_t const time_pos = (flat / strides[*time_dim]) % sizes[*time_dim];
      double const      v        = value.get<double>();
      if (v < 0.0)
      {
        throw Error(ErrorCode::invariant, "negative indicator value in " + spec.id);
      }
      by_country[from_eurostat_geo(codes[*geo_dim][geo_pos])].push_back(
          IndicatorPoint{parse_time_code(codes[*time_dim][time_pos]), v});
    };

    json const &values = document.at("value");
    if (values.is_array())
    {
      for (std::size_t i = 0; i < values.size(); ++i)
      {
        add(i, values[i]);
      }
    }
    else
    {
      for (auto const &[key, value] : values.items())
      {
        add(std::stoul(key), value);
      }
    }
  }
  catch (json::exception const &e)
  {
    throw Error(ErrorCode::parse, std::string{"JSON-stat payload: "} + e.what());
  }

  std::vector<IndicatorSeries> result;
  for (auto &[country, points] : by_country)
  {
    std::sort(points.begin(), points.end(),
              [](auto const &a, auto const &b) { return a.year < b.year; });
    for (std::size_t i = 1; i < points.size(); ++i)
    {
      if (points[i].year == points[i - 1].year)
      {
        throw Error(ErrorCode::duplicate_point,
                    spec.id + "/" + country + " has two values for " + std::to_string(points[i].year));
      }
    }
    result.push_back(IndicatorSeries{spec.id, country, spec.unit, std::move(points)});
  }
  return result;
}

std::vector<IndicatorSeries> fetch_indicator(std::string_view dataset_id,
                                             std::vector<std::string> const &countries,
                                             YearRange years, EndpointConfig const &config)
{
  DatasetSpec const spec  = with_overrides(find_dataset(dataset_id), config);
  std::string const query = build_query(spec, countries, years, config);
  std::optional<std::filesystem::path> cached;
  if (!config.cache_dir.empty())
  {
    cached = cache_path(config, spec.id, query);
  }

  if (config.offline)
  {
    if (!cached || !std::filesystem::exists(*cached))
    {
      throw Error(ErrorCode::fetch, "offline mode and no cached payload for " + spec.id);
    }
    return parse_jsonstat(spec, detail::read_file(*cached));
  }

  httplib::Client client(config.base_url);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);
  client.set_follow_location(true);

  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= std::max(0, config.retries); ++attempt)
  {
    auto response = client.Get(query);
    if (!response)
    {
      last_failure = httplib::to_string(response.error());
      continue;
    }
    if (response->status == 200)
    {
      auto series = parse_jsonstat(spec, response->body);
      if (cached)
      {
        std::filesystem::create_directories(cached->parent_path());
        detail::write_file(*cached, response->body);
      }
      return series;
    }
    last_failure = "HTTP " + std::to_string(response->status);
    bool const transient = response->status == 429 || response->status >= 500;
    if (!transient)
    {
      throw Error(ErrorCode::fetch, spec.id + ": " + last_failure, false);
    }
  }
  throw Error(ErrorCode::fetch, spec.id + ": " + last_failure, true);
}

}  // namespace circex
