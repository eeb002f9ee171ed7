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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace circex {

/// Paired observations; `x` is usually the year axis.
struct PairedSeries
{
  std::string         label;
  std::string         x_label = "x";
  std::string         y_label = "y";
  std::vector<double> x;
  std::vector<double> y;
};

struct DescriptiveSummary
{
  std::size_t n        = 0;
  double      mean     = 0.0;
  double      variance = 0.0;  // sample, n - 1 denominator
  double      std_dev  = 0.0;
  double      min      = 0.0;
  double      max      = 0.0;
};

/// Throws insufficient_data for n < 2 and domain for non-finite values.
DescriptiveSummary describe(std::span<double const> values);

enum class CorrelationMethod
{
  pearson,
  kendall,
  spearman,
};

char const                      *to_string(CorrelationMethod method) noexcept;
std::optional<CorrelationMethod> parse_correlation_method(std::string const &text) noexcept;

struct CorrelationReport
{
  CorrelationMethod     method      = CorrelationMethod::pearson;
  double                coefficient = 0.0;
  std::size_t           n           = 0;
  double                confidence  = 0.95;
  std::optional<double> ci_low;   // Fisher z, Pearson only
  std::optional<double> ci_high;
  std::optional<double> p_value;  // t test, Pearson only
};

/// Product-moment correlation. Needs n >= 3 and non-zero variance in both
/// coordinates (undefined error otherwise). The Fisher interval is attached
/// when n >= 4, the t-test p-value always.
CorrelationReport pearson(std::span<double const> x, std::span<double const> y,
                          double confidence = 0.95);

/// Kendall tau-b in O(n log n) (Knight's merge-sort count). Throws
/// undefined when either coordinate is entirely tied.
CorrelationReport kendall_tau(std::span<double const> x, std::span<double const> y);

/// Spearman rho as the Pearson correlation of average ranks, evaluated in
/// integer arithmetic on doubled ranks so ties are exact.
CorrelationReport spearman_rho(std::span<double const> x, std::span<double const> y);

CorrelationReport correlate(CorrelationMethod method, PairedSeries const &series,
                            double confidence = 0.95);

/// Average (mid) ranks starting at 1.
std::vector<double> average_ranks(std::span<double const> values);

struct Interval
{
  double low  = 0.0;
  double high = 0.0;
};

/// Fisher z interval: tanh(atanh(r) -/+ q / sqrt(n - 3)), q the two-sided
/// standard-normal quantile. |r| = 1 gives the degenerate (r, r).
Interval fisher_interval(double r, std::size_t n, double confidence);

/// Two-sided p-value of H0: rho = 0 from t = r sqrt(n-2) / sqrt(1-r^2) with
/// n - 2 degrees of freedom.
double correlation_significance(double r, std::size_t n);

/// 1, 2, ..., n as an alternative x axis.
std::vector<double> index_axis(std::size_t n);

}  // namespace circex
