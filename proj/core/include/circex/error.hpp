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

#include <stdexcept>
#include <string>
#include <string_view>

namespace circex {

enum class ErrorCode
{
  parse,              // malformed cell or document
  duplicate_key,      // organization repeated within a year
  duplicate_point,    // indicator (dataset, country, year) repeated
  empty_dataset,      // table without data rows
  schema,             // unknown column, unit, category or route kind
  invariant,          // a record violates a domain-type invariant
  domain,             // argument outside the mathematical domain
  incomplete_input,   // required field or baseline missing
  insufficient_data,  // too few observations for the statistic
  undefined,          // division by zero, zero variance, all-tied ranks
  fetch,              // network or remote service failure
  configuration,      // bad config key, unknown dataset, missing path
  io,                 // unreadable or unwritable file
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library. The code classifies the failure
/// and `retryable()` marks transient fetch failures.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, std::string const &message, bool retryable = false);

  ErrorCode code() const noexcept
  {
    return code_;
  }

  bool retryable() const noexcept
  {
    return retryable_;
  }

private:
  ErrorCode code_;
  bool      retryable_;
};

}  // namespace circex
