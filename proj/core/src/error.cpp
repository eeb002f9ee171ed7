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

namespace circex {

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code)
  {
  case ErrorCode::parse:
    return "parse";
  case ErrorCode::duplicate_key:
    return "duplicate_key";
  case ErrorCode::duplicate_point:
    return "duplicate_point";
  case ErrorCode::empty_dataset:
    return "empty_dataset";
  case ErrorCode::schema:
    return "schema";
  case ErrorCode::invariant:
    return "invariant";
  case ErrorCode::domain:
    return "domain";
  case ErrorCode::incomplete_input:
    return "incomplete_input";
  case ErrorCode::insufficient_data:
    return "insufficient_data";
  case ErrorCode::undefined:
    return "undefined";
  case ErrorCode::fetch:
    return "fetch";
  case ErrorCode::configuration:
    return "configuration";
  case ErrorCode::io:
    return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string const &message, bool retryable)
  : std::runtime_error(std::string{to_string(code)} + ": " + message)
  , code_{code}
  , retryable_{retryable}
{}

}  // namespace circex
