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

#include "circex/stats.hpp"

#include "circex/distributions.hpp"
#include "circex/error.hpp"
#include "circex/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace circex {

namespace {

__extension__ typedef __int128 wide_int;

void require_paired(std::span<double const> x, std::span<double const> y, std::size_t min_n)
{
  if (x.size() != y.size())
  {
    throw Error(ErrorCode::domain, "paired series differ in length");
  }
  if (x.size() < min_n)
  {
    throw Error(ErrorCode::insufficient_data, "need at least " + std::to_string(min_n) +
                                                  " pairs, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
    {
      throw Error(ErrorCode::domain, "non-finite observation at index " + std::to_string(i));
    }
  }
}

double clamp_unit(double r) noexcept
{
  return std::clamp(r, -1.0, 1.0);
}

// Pairs tied within runs of equal values in an already sorted sequence.
template <typename Equal>
std::int64_t tied_pairs(std::size_t n, Equal equal)
{
  std::int64_t total = 0;
  std::size_t  run   = 1;
  for (std::size_t i = 1; i <= n; ++i)
  {
    if (i < n && equal(i - 1, i))
    {
      ++run;
    }
    else
    {
      total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

std::int64_t count_inversions(std::vector<double> &values, std::vector<double> &scratch,
                              std::size_t lo, std::size_t hi)
{
  if (hi - lo < 2)
  {
    return 0;
  }
  std::size_t const mid   = lo + (hi - lo) / 2;
  std::int64_t      swaps = count_inversions(values, scratch, lo, mid) +
                       count_inversions(values, scratch, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi)
  {
    if (values[j] < values[i])
    {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = values[j++];
    }
    else
    {
      scratch[k++] = values[i++];
    }
  }
  while (i < mid)
  {
    scratch[k++] = values[i++];
  }
  while (j < hi)
  {
    scratch[k++] = values[j++];
  }
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

// Doubled mid-ranks: 2 * (#smaller) + (#equal) + 1, always an integer.
std::vector<std::int64_t> doubled_ranks(std::span<double const> values)
{
  std::size_t const        n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<std::int64_t> ranks(n);
  std::size_t               start = 0;
  while (start < n)
  {
    std::size_t end = start + 1;
    while (end < n && values[order[end]] == values[order[start]])
    {
      ++end;
    }
    auto const doubled = static_cast<std::int64_t>(2 * start + (end - start) + 1);
    for (std::size_t k = start; k < end; ++k)
    {
      ranks[order[k]] = doubled;
    }
    start = end;
  }
  return ranks;
}

}  // namespace

DescriptiveSummary describe(std::span<double const> values)
{
  if (values.size() < 2)
  {
    throw Error(ErrorCode::insufficient_data, "variance needs at least two values");
  }
  for (double v : values)
  {
    if (!std::isfinite(v))
    {
      throw Error(ErrorCode::domain, "non-finite value in series");
    }
  }
  auto const n = static_cast<double>(values.size());

  DescriptiveSummary s;
  s.n                  = values.size();
  auto const [lo, hi]  = std::minmax_element(values.begin(), values.end());
  s.min                = *lo;
  s.max                = *hi;
  s.mean               = std::clamp(exact_sum(values) / n, s.min, s.max);

  std::vector<double> squares;
  squares.reserve(values.size());
  for (double v : values)
  {
    squares.push_back((v - s.mean) * (v - s.mean));
  }
  s.variance = exact_sum(squares) / (n - 1.0);
  s.std_dev  = std::sqrt(s.variance);
  return s;
}

char const *to_string(CorrelationMethod method) noexcept
{
  switch (method)
  {
  case CorrelationMethod::pearson:
    return "pearson";
  case CorrelationMethod::kendall:
    return "kendall";
  case CorrelationMethod::spearman:
    return "spearman";
  }
  return "unknown";
}

std::optional<CorrelationMethod> parse_correlation_method(std::string const &text) noexcept
{
  for (auto m : {CorrelationMethod::pearson, CorrelationMethod::kendall, CorrelationMethod::spearman})
  {
    if (text == to_string(m))
    {
      return m;
    }
  }
  return std::nullopt;
}

namespace {

// n * sum(a * b) - sum(a) * sum(b), rounded once from the exact value.
double centered_cross(std::span<double const> a, std::span<double const> b)
{
  ExactAccumulator sum_ab;
  ExactAccumulator sum_a;
  ExactAccumulator sum_b;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    sum_ab.add_product(a[i], b[i]);
    sum_a.add(a[i]);
    sum_b.add(b[i]);
  }
  auto const       n = static_cast<double>(a.size());
  ExactAccumulator total;
  for (double p : sum_ab.partials())
  {
    total.add_product(n, p);
  }
  for (double pa : sum_a.partials())
  {
    for (double pb : sum_b.partials())
    {
      total.add_product(-pa, pb);
    }
  }
  return total.result();
}

// Copy scaled by a power of two so the largest magnitude lies in [1, 2).
// The scaling is exact and leaves the correlation unchanged.
std::vector<double> normalized(std::span<double const> v)
{
  double peak = 0.0;
  for (double d : v)
  {
    peak = std::max(peak, std::fabs(d));
  }
  int const           shift = peak > 0.0 ? -std::ilogb(peak) : 0;
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [shift](double d) { return std::ldexp(d, shift); });
  return out;
}

}  // namespace

CorrelationReport pearson(std::span<double const> x, std::span<double const> y, double confidence)
{
  require_paired(x, y, 3);
  auto const   nx  = normalized(x);
  auto const   ny  = normalized(y);
  double const num = centered_cross(nx, ny);
  double const vx  = centered_cross(nx, nx);
  double const vy  = centered_cross(ny, ny);
  if (vx == 0.0 || vy == 0.0)
  {
    throw Error(ErrorCode::undefined, "Pearson correlation undefined for a constant coordinate");
  }
  double const r = num / std::sqrt(vx * vy);

  CorrelationReport report;
  report.method      = CorrelationMethod::pearson;
  report.n           = x.size();
  report.confidence  = confidence;
  report.coefficient = clamp_unit(r);
  report.p_value     = correlation_significance(report.coefficient, report.n);
  if (report.n >= 4)
  {
    Interval const ci = fisher_interval(report.coefficient, report.n, confidence);
    report.ci_low     = ci.low;
    report.ci_high    = ci.high;
  }
  return report;
}

CorrelationReport kendall_tau(std::span<double const> x, std::span<double const> y)
{
  require_paired(x, y, 2);
  std::size_t const        n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::int64_t const x_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]];
  });
  std::int64_t const joint_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
  });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    ys[i] = y[order[i]];
  }
  std::vector<double> scratch(n);
  std::int64_t const  discordant = count_inversions(ys, scratch, 0, n);  // ys is now sorted
  std::int64_t const  y_ties =
      tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

  auto const         nn     = static_cast<std::int64_t>(n);
  std::int64_t const pairs  = nn * (nn - 1) / 2;
  std::int64_t const c_minus_d = pairs - x_ties - y_ties + joint_ties - 2 * discordant;
  if (pairs - x_ties == 0 || pairs - y_ties == 0)
  {
    throw Error(ErrorCode::undefined, "Kendall tau undefined: a coordinate is entirely tied");
  }

  CorrelationReport report;
  report.method      = CorrelationMethod::kendall;
  report.n           = n;
  report.coefficient = clamp_unit(static_cast<double>(c_minus_d) /
                                  std::sqrt(static_cast<double>(pairs - x_ties) *
                                            static_cast<double>(pairs - y_ties)));
  return report;
}

CorrelationReport spearman_rho(std::span<double const> x, std::span<double const> y)
{
  require_paired(x, y, 3);
  auto const rx = doubled_ranks(x);
  auto const ry = doubled_ranks(y);

  wide_int sx  = 0;
  wide_int sy  = 0;
  wide_int sxx = 0;
  wide_int syy = 0;
  wide_int sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i)
  {
    sx += rx[i];
    sy += ry[i];
    sxx += static_cast<wide_int>(rx[i]) * rx[i];
    syy += static_cast<wide_int>(ry[i]) * ry[i];
    sxy += static_cast<wide_int>(rx[i]) * ry[i];
  }
  auto const     n   = static_cast<wide_int>(rx.size());
  wide_int const num = n * sxy - sx * sy;
  wide_int const dx  = n * sxx - sx * sx;
  wide_int const dy  = n * syy - sy * sy;
  if (dx == 0 || dy == 0)
  {
    throw Error(ErrorCode::undefined, "Spearman rho undefined for a constant coordinate");
  }

  CorrelationReport report;
  report.method      = CorrelationMethod::spearman;
  report.n           = rx.size();
  report.coefficient = clamp_unit(static_cast<double>(num) /
                                  std::sqrt(static_cast<double>(dx) * static_cast<double>(dy)));
  return report;
}

CorrelationReport correlate(CorrelationMethod method, PairedSeries const &series, double confidence)
{
  switch (method)
  {
  case CorrelationMethod::pearson:
    return pearson(series.x, series.y, confidence);
  case CorrelationMethod::kendall:
    return kendall_tau(series.x, series.y);
  case CorrelationMethod::spearman:
    return spearman_rho(series.x, series.y);
  }
  throw Error(ErrorCode::configuration, "unknown correlation method");
}

std::vector<double> average_ranks(std::span<double const> values)
{
  auto const          doubled = doubled_ranks(values);
  std::vector<double> ranks(doubled.size());
  std::transform(doubled.begin(), doubled.end(), ranks.begin(),
                 [](std::int64_t r) { return static_cast<double>(r) / 2.0; });
  return ranks;
}

Interval fisher_interval(double r, std::size_t n, double confidence)
{
  if (!(confidence > 0.0 && confidence < 1.0))
  {
    throw Error(ErrorCode::domain, "confidence must lie in (0, 1)");
  }
  if (!(std::fabs(r) <= 1.0))
  {
    throw Error(ErrorCode::domain, "correlation coefficient outside [-1, 1]");
  }
  if (n < 4)
  {
    throw Error(ErrorCode::insufficient_data, "Fisher interval needs n >= 4");
  }
  if (std::fabs(r) == 1.0)
  {
    return {r, r};
  }
  double const z    = std::atanh(r);
  double const q    = normal_quantile(1.0 - (1.0 - confidence) / 2.0);
  double const half = q / std::sqrt(static_cast<double>(n) - 3.0);
  return {std::tanh(z - half), std::tanh(z + half)};
}

double correlation_significance(double r, std::size_t n)
{
  if (n < 3)
  {
    throw Error(ErrorCode::insufficient_data, "significance test needs n >= 3");
  }
  if (!(std::fabs(r) <= 1.0))
  {
    throw Error(ErrorCode::domain, "correlation coefficient outside [-1, 1]");
  }
  if (std::fabs(r) == 1.0)
  {
    return 0.0;
  }
  double const df = static_cast<double>(n) - 2.0;
  double const t  = r * std::sqrt(df) / std::sqrt(1.0 - r * r);
  return student_t_two_sided_p(t, df);
}

std::vector<double> index_axis(std::size_t n)
{
  std::vector<double> axis(n);
  std::iota(axis.begin(), axis.end(), 1.0);
  return axis;
}

}  // namespace circex
