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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace circex::detail {

struct CsvRow
{
  std::size_t              line = 0;  // 1-based physical line of the first cell
  std::vector<std::string> cells;
};

struct CsvTable
{
  char                     delimiter = ',';
  std::vector<std::string> header;
  std::vector<CsvRow>      rows;

  /// Index of a named header column; throws schema error when absent.
  std::size_t column(std::string_view name) const;
  bool        has_column(std::string_view name) const noexcept;
};

/// RFC-4180 style reader. The delimiter (',', ';' or tab) is detected from
/// the header line. Blank lines are skipped, a UTF-8 BOM is stripped and
/// cells are trimmed of surrounding blanks unless quoted.
CsvTable read_csv(std::string_view text);

std::string csv_escape(std::string_view cell, char delimiter);

std::string read_file(std::filesystem::path const &path);
void        write_file(std::filesystem::path const &path, std::string_view content);

}  // namespace circex::detail
