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

#include "circex/numeric.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace circex {

void ExactAccumulator::add(double value)
{
  std::size_t i = 0;
  for (double y : partials_)
  {
    if (std::fabs(value) < std::fabs(y))
    {
      std::swap(value, y);
    }
    double const hi = value + y;
    double const lo = y - (hi - value);
    if (lo != 0.0)
    {
      partials_[i++] = lo;
    }
    value = hi;
  }
  partials_.resize(i);
  partials_.push_back(value);
}

void ExactAccumulator::add_product(double a, double b)
{
  double const hi = a * b;
  add(hi);
  add(std::fma(a, b, -hi));
}

double ExactAccumulator::result() const
{
  std::size_t n = partials_.size();
  if (n == 0)
  {
    return 0.0;
  }
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0)
  {
    double const x  = hi;
    double const y  = partials_[--n];
    hi              = x + y;
    double const yr = hi - x;
    lo              = y - yr;
    if (lo != 0.0)
    {
      break;
    }
  }
  // Round-half-even correction when the remaining partials push the
  // discarded tail past the halfway point.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0)))
  {
    double const y  = lo * 2.0;
    double const x  = hi + y;
    double const yr = x - hi;
    if (y == yr)
    {
      hi = x;
    }
  }
  return hi;
}

double exact_sum(std::span<double const> values)
{
  bool finite = true;
  for (double v : values)
  {
    finite = finite && std::isfinite(v);
  }
  if (!finite)
  {
    double naive = 0.0;
    for (double v : values)
    {
      naive += v;
    }
    return naive;
  }
  ExactAccumulator acc;
  for (double v : values)
  {
    acc.add(v);
  }
  return acc.result();
}

bool approx_equal(double a, double b, double rel_tolerance) noexcept
{
  double const scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel_tolerance * scale;
}

namespace {

bool is_blank(char c) noexcept
{
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

bool is_digit(char c) noexcept
{
  return c >= '0' && c <= '9';
}

}  // namespace

std::optional<double> parse_decimal(std::string_view text) noexcept
{
  while (!text.empty() && is_blank(text.front()))
  {
    text.remove_prefix(1);
  }
  while (!text.empty() && is_blank(text.back()))
  {
    text.remove_suffix(1);
  }
  if (text.empty() || text.size() > 64)
  {
    return std::nullopt;
  }

  std::array<char, 64> buffer{};
  std::size_t          len = 0;
  std::size_t          pos = 0;
  if (text[pos] == '-')
  {
    buffer[len++] = '-';
    ++pos;
  }
  std::size_t const int_start = pos;
  while (pos < text.size() && is_digit(text[pos]))
  {
    buffer[len++] = text[pos++];
  }
  if (pos == int_start)
  {
    return std::nullopt;
  }
  if (pos < text.size())
  {
    if (text[pos] != '.' && text[pos] != ',')
    {
      return std::nullopt;
    }
    buffer[len++] = '.';
    ++pos;
    std::size_t const frac_start = pos;
    while (pos < text.size() && is_digit(text[pos]))
    {
      buffer[len++] = text[pos++];
    }
    if (pos == frac_start || pos != text.size())
    {
      return std::nullopt;
    }
  }

  double value = 0.0;
  auto const [end, ec] = std::from_chars(buffer.data(), buffer.data() + len, value);
  if (ec != std::errc{} || end != buffer.data() + len)
  {
    return std::nullopt;
  }
  return value;
}

std::string format_shortest(double value)
{
  std::array<char, 512> buffer{};
  auto const [end, ec] =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::fixed);
  if (ec != std::errc{})
  {
    return "nan";
  }
  return std::string(buffer.data(), end);
}

double round_to(double value, int decimals) noexcept
{
  if (!std::isfinite(value))
  {
    return value;
  }
  double const scale   = std::pow(10.0, decimals);
  double const rounded = std::round(value * scale) / scale;
  return rounded == 0.0 ? 0.0 : rounded;
}

}  // namespace circex
