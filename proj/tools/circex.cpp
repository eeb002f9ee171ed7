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

// circex: command-line front end for the registry, model, statistics and
// comparison pipeline.

#include "circex/baselines.hpp"
#include "circex/error.hpp"
#include "circex/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;
using circex::RunConfig;

// Flag values are gathered as strings and applied through the same path as
// the config file, so flags override file settings key by key.
struct FlagSettings
{
  std::map<std::string, std::string> values;
  std::optional<std::string>         config_file;
  std::optional<std::string>         output;

  void add_string(CLI::App *app, std::string const &flag, std::string const &key,
                  std::string const &help)
  {
    app->add_option_function<std::string>(
        flag, [this, key](std::string const &v) { values[key] = v; }, help);
  }

  void add_flag(CLI::App *app, std::string const &flag, std::string const &key,
                std::string const &help)
  {
    app->add_flag_function(
        flag, [this, key](std::int64_t count) { values[key] = count > 0 ? "true" : "false"; }, help);
  }

  void add_common(CLI::App *app)
  {
    app->add_option_function<std::string>(
        "--config", [this](std::string const &v) { config_file = v; }, "key=value config file");
    app->add_option_function<std::string>(
        "-o,--output", [this](std::string const &v) { output = v; },
        "write the report here instead of stdout");
    add_string(app, "--out-dir", "out_dir", "directory for report.json and plot-data files");
    add_string(app, "--format", "format", "json or csv");
  }
};

RunConfig build_config(FlagSettings const &flags)
{
  RunConfig config;
  if (flags.config_file)
  {
    config = circex::load_config_file(*flags.config_file);
  }
  if (char const *cache = std::getenv("CIRCEX_CACHE_DIR"); cache && *cache)
  {
    config.endpoint.cache_dir = cache;
  }
  circex::apply_settings(flags.values, config);
  return config;
}

void write_text(std::optional<std::string> const &path, std::string const &text)
{
  if (!path)
  {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw circex::Error(circex::ErrorCode::io, "cannot write '" + *path + "'");
  }
  out << text;
}

int run_pipeline(FlagSettings const &flags, std::function<circex::Stages(RunConfig const &)> stages)
{
  RunConfig config;
  try
  {
    config        = build_config(flags);
    config.stages = stages(config);
  }
  catch (circex::Error const &e)
  {
    std::cerr << "circex: " << e.what() << '\n';
    return circex::exit_code::configuration;
  }

  auto outcome = circex::run_analysis(config);
  auto const &report = outcome.report;
  try
  {
    std::string const text = config.format == circex::OutputFormat::csv && !report.spc.empty()
                                 ? circex::to_csv(report)
                                 : circex::to_json(report);
    write_text(flags.output, text);
    if (config.output_dir)
    {
      for (auto const &path : circex::emit_plot_series(report, *config.output_dir))
      {
        std::cerr << "wrote " << path.string() << '\n';
      }
      std::ofstream out(*config.output_dir / "report.json", std::ios::binary | std::ios::trunc);
      out << circex::to_json(report);
    }
  }
  catch (circex::Error const &e)
  {
    std::cerr << "circex: " << e.what() << '\n';
    return circex::exit_code::configuration;
  }

  if (report.error)
  {
    std::cerr << "circex: " << *report.error << '\n';
  }
  for (auto const &v : report.validation)
  {
    if (!v.pass())
    {
      std::cerr << "circex: " << v.year << " totals mismatch: released delta "
                << v.released_delta << " t, regenerated delta " << v.regenerated_delta << " t\n";
    }
  }
  for (auto const &note : report.discrepancies)
  {
    std::cerr << "note: " << note.quantity << ": " << note.note << '\n';
  }
  return outcome.exit_code;
}

struct BaselineArgs
{
  std::optional<double> private_costs, external, opportunity;
  std::optional<double> mscr, mscv, mscd;
  std::optional<double> price, mpc, msc, wtp;
  bool                  compensating = false;
  double                tolerance    = 1e-9;
};

int run_baseline(BaselineArgs const &a)
{
  using nlohmann::ordered_json;
  ordered_json out = ordered_json::object();
  try
  {
    circex::Tolerance const tol{a.tolerance};
    if (a.private_costs && (a.external || a.opportunity))
    {
      circex::CostDecomposition d;
      d.private_costs            = *a.private_costs;
      d.external_costs           = a.external.value_or(0.0);
      d.social_opportunity_costs = a.opportunity.value_or(0.0);
      d.compensating_externality = a.compensating;
      if (a.external)
      {
        out["neoclassical_social_cost"] = circex::neoclassical_social_cost(d);
      }
      if (a.opportunity)
      {
        auto const inst = circex::institutional_social_cost(d);
        out["institutional_social_cost"] = {{"value", inst.value}, {"negative", inst.negative}};
      }
    }
    if (a.mscr || a.mscv || a.mscd)
    {
      if (!a.mscr || !a.mscv || !a.mscd)
      {
        throw circex::Error(circex::ErrorCode::configuration, "--mscr, --mscv and --mscd go together");
      }
      auto const gap = circex::recycling_optimality_gap({*a.mscr, *a.mscv, *a.mscd}, tol);
      out["recycling_optimality"] = {{"gap", gap.gap}, {"balance", circex::to_string(gap.balance)}};
    }
    if (a.price || a.mpc || a.msc || a.wtp)
    {
      if (!a.price || !a.mpc || !a.msc || !a.wtp)
      {
        throw circex::Error(circex::ErrorCode::configuration,
                            "--price, --mpc, --msc and --wtp go together");
      }
      auto const d = circex::price_alignment_diagnosis({*a.price, *a.mpc, *a.msc, *a.wtp}, tol);
      out["price_alignment"] = {{"diagnosis", circex::to_string(d.diagnosis)},
                                {"wtp_covers_msc", d.wtp_covers_msc}};
    }
    if (out.empty())
    {
      throw circex::Error(circex::ErrorCode::configuration, "no baseline inputs given");
    }
  }
  catch (circex::Error const &e)
  {
    std::cerr << "circex: " << e.what() << '\n';
    return e.code() == circex::ErrorCode::configuration ? circex::exit_code::configuration
                                                        : circex::exit_code::validation_failure;
  }
  std::cout << out.dump(2) << '\n';
  return circex::exit_code::success;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"circex: waste-recovery registry reconciliation, social public cost model, "
               "correlation statistics and country indicator comparison"};
  app.set_version_flag("--version", std::string{circex::tool_version()});
  app.require_subcommand(1);

  FlagSettings flags;

  auto *validate = app.add_subcommand("validate", "reconcile registry rows with TOTAL rows");
  flags.add_common(validate);
  flags.add_string(validate, "--registry", "registry", "registry.csv");

  auto *model = app.add_subcommand("model", "social public costs, transaction costs and balance");
  flags.add_common(model);
  flags.add_string(model, "--registry", "registry", "registry.csv");
  flags.add_string(model, "--capacity", "capacity", "capacity.csv");
  flags.add_string(model, "--demand", "demand", "demand.csv");
  flags.add_string(model, "--ledger", "ledger", "ledger.csv");
  flags.add_string(model, "--conversion-rate", "conversion_rate", "monetary units per ton");
  flags.add_flag(model, "--dimensionless", "dimensionless", "compare SPC and TrC as plain numbers");
  flags.add_string(model, "--monetary-unit", "monetary_unit", "label for ledger amounts");
  flags.add_flag(model, "--allow-negative-ledger", "allow_negative_ledger",
                 "accept negative ledger amounts");
  flags.add_string(model, "--tolerance", "balance_tolerance", "|ln(SPC/TrC)| tolerance");

  auto *stats = app.add_subcommand("stats", "descriptive statistics and correlations");
  flags.add_common(stats);
  flags.add_string(stats, "--series", "series", "CSV with the x and y columns");
  flags.add_string(stats, "--x", "series.x", "x column (default year)");
  flags.add_string(stats, "--y", "series.y", "y column (default spc_magnitude)");
  flags.add_string(stats, "--methods", "methods", "comma list of pearson,kendall,spearman");
  flags.add_string(stats, "--confidence", "confidence", "Fisher interval level");
  flags.add_flag(stats, "--index-axis", "index_axis", "use 1..n instead of the x values");
  flags.add_flag(stats, "--signed", "signed", "raw SPC values instead of magnitudes");
  flags.add_string(stats, "--registry", "registry", "derive the series from the model");
  flags.add_string(stats, "--capacity", "capacity", "capacity.csv for the model");
  flags.add_string(stats, "--demand", "demand", "demand.csv for the model");

  auto *compare = app.add_subcommand("compare", "cross-country indicator comparison");
  flags.add_common(compare);
  flags.add_string(compare, "--indicators", "indicators", "indicators.csv");
  flags.add_string(compare, "--datasets", "datasets", "comma list of dataset ids");
  flags.add_string(compare, "--reference", "reference_country", "reference country code");
  flags.add_string(compare, "--countries", "countries", "comma list of country codes");
  flags.add_flag(compare, "--fetch", "fetch", "download the datasets from the statistics endpoint");
  flags.add_flag(compare, "--offline", "offline", "serve fetches from the cache only");
  flags.add_string(compare, "--cache-dir", "cache_dir", "download cache directory");
  flags.add_string(compare, "--endpoint", "endpoint", "statistics endpoint base URL");

  auto *report = app.add_subcommand("report", "full pipeline");
  flags.add_common(report);
  for (auto const &[flag, key] : std::map<std::string, std::string>{
           {"--registry", "registry"},       {"--capacity", "capacity"},
           {"--demand", "demand"},           {"--ledger", "ledger"},
           {"--indicators", "indicators"},   {"--conversion-rate", "conversion_rate"},
           {"--datasets", "datasets"},       {"--reference", "reference_country"},
           {"--countries", "countries"},     {"--confidence", "confidence"},
           {"--cache-dir", "cache_dir"},     {"--endpoint", "endpoint"}})
  {
    flags.add_string(report, flag, key, key);
  }
  flags.add_flag(report, "--dimensionless", "dimensionless", "compare SPC and TrC as plain numbers");
  flags.add_flag(report, "--signed", "signed", "raw SPC values instead of magnitudes");
  flags.add_flag(report, "--index-axis", "index_axis", "use 1..n instead of years");
  flags.add_flag(report, "--fetch", "fetch", "download indicator datasets");
  flags.add_flag(report, "--offline", "offline", "serve fetches from the cache only");

  BaselineArgs baseline_args;
  auto *baseline = app.add_subcommand("baseline", "neoclassical and institutional cost baselines");
  baseline->add_option("--private", baseline_args.private_costs, "private costs");
  baseline->add_option("--external", baseline_args.external, "external costs");
  baseline->add_option("--opportunity", baseline_args.opportunity, "social opportunity costs");
  baseline->add_option("--mscr", baseline_args.mscr, "marginal social cost of recycling");
  baseline->add_option("--mscv", baseline_args.mscv, "marginal social cost of virgin material");
  baseline->add_option("--mscd", baseline_args.mscd, "marginal disposal cost of virgin material");
  baseline->add_option("--price", baseline_args.price, "price P");
  baseline->add_option("--mpc", baseline_args.mpc, "marginal private cost");
  baseline->add_option("--msc", baseline_args.msc, "marginal social cost");
  baseline->add_option("--wtp", baseline_args.wtp, "willingness to pay");
  baseline->add_flag("--compensating", baseline_args.compensating,
                     "negative external costs model a compensating externality");
  baseline->add_option("--tolerance", baseline_args.tolerance, "relative equality tolerance");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? 0 : circex::exit_code::configuration;
  }

  auto const fixed = [](circex::Stages stages) {
    return [stages](RunConfig const &) { return stages; };
  };
  if (*validate)
  {
    return run_pipeline(flags, fixed({true, false, false, false}));
  }
  if (*model)
  {
    return run_pipeline(flags, fixed({true, true, false, false}));
  }
  if (*stats)
  {
    // A series file takes precedence; otherwise the series comes from the model.
    return run_pipeline(flags, [](RunConfig const &config) {
      bool const from_model = !config.series.has_value();
      return circex::Stages{from_model, from_model, true, false};
    });
  }
  if (*compare)
  {
    return run_pipeline(flags, fixed({false, false, false, true}));
  }
  if (*report)
  {
    return run_pipeline(flags, fixed({true, true, true, true}));
  }
  return run_baseline(baseline_args);
}
