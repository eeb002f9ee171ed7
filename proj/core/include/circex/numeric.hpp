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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace circex {

/// Tonnage equality tolerance: registry tables print three decimals.
inline constexpr double kTonnageTolerance = 0.001;

/// Correctly rounded floating-point sum (Shewchuk's exact partials).
/// The result does not depend on the order of the inputs.
double exact_sum(std::span<double const> values);

/// Streaming form of exact_sum.
class ExactAccumulator
{
public:
  void   add(double value);
  /// Adds a * b without rounding the product.
  void   add_product(double a, double b);
  double result() const;

  std::span<double const> partials() const noexcept
  {
    return partials_;
  }

private:
  std::vector<double> partials_;
};

/// |a - b| <= rel * max(1, |a|, |b|).
bool approx_equal(double a, double b, double rel_tolerance) noexcept;

/// Parses a plain decimal literal. Accepts a single '.' or ',' as the
/// decimal separator and an optional leading '-'. Rejects thousands
/// separators, exponents, blanks and anything else.
std::optional<double> parse_decimal(std::string_view text) noexcept;

/// Shortest representation that round-trips through parse_decimal.
std::string format_shortest(double value);

/// Rounds to a fixed number of decimal places; used for derived values in
/// serialized reports.
double round_to(double value, int decimals) noexcept;

}  // namespace circex
