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

#include "csv.hpp"

#include "circex/error.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace circex::detail {

namespace {

char detect_delimiter(std::string_view text)
{
  std::array<std::size_t, 3> counts{};  // ';', '\t', ','
  bool                       quoted = false;
  for (char c : text)
  {
    if (c == '"')
    {
      quoted = !quoted;
    }
    else if (!quoted && (c == '\n' || c == '\r'))
    {
      break;
    }
    else if (!quoted)
    {
      counts[0] += c == ';';
      counts[1] += c == '\t';
      counts[2] += c == ',';
    }
  }
  if (counts[0] > 0 && counts[0] >= counts[2])
  {
    return ';';
  }
  if (counts[1] > 0 && counts[1] >= counts[2])
  {
    return '\t';
  }
  return ',';
}

std::string trim(std::string_view s)
{
  auto const blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front()))
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && blank(s.back()))
  {
    s.remove_suffix(1);
  }
  return std::string{s};
}

}  // namespace

std::size_t CsvTable::column(std::string_view name) const
{
  auto const it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
  {
    throw Error(ErrorCode::schema, "missing column '" + std::string{name} + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const noexcept
{
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(std::string_view text)
{
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
  {
    text.remove_prefix(3);
  }

  CsvTable table;
  table.delimiter = detect_delimiter(text);

  std::vector<CsvRow> records;
  CsvRow              current;
  std::string         cell;
  bool                in_quotes   = false;
  bool                was_quoted  = false;
  bool                row_started = false;
  std::size_t         line        = 1;

  auto const finish_cell = [&] {
    current.cells.push_back(was_quoted ? cell : trim(cell));
    cell.clear();
    was_quoted = false;
  };
  auto const finish_row = [&] {
    finish_cell();
    bool const blank = current.cells.size() == 1 && current.cells.front().empty() && !row_started;
    if (!blank)
    {
      records.push_back(std::move(current));
    }
    current     = CsvRow{};
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i)
  {
    char const c = text[i];
    if (current.cells.empty() && cell.empty() && !row_started)
    {
      current.line = line;
    }
    if (in_quotes)
    {
      if (c == '"')
      {
        if (i + 1 < text.size() && text[i + 1] == '"')
        {
          cell.push_back('"');
          ++i;
        }
        else
        {
          in_quotes = false;
        }
      }
      else
      {
        if (c == '\n')
        {
          ++line;
        }
        cell.push_back(c);
      }
      continue;
    }
    if (c == '"' && trim(cell).empty() && !was_quoted)
    {
      cell.clear();
      in_quotes   = true;
      was_quoted  = true;
      row_started = true;
    }
    else if (c == table.delimiter)
    {
      finish_cell();
      row_started = true;
    }
    else if (c == '\n')
    {
      finish_row();
      ++line;
    }
    else if (c == '\r')
    {
      // CRLF; the '\n' finishes the row
    }
    else
    {
      cell.push_back(c);
      if (c != ' ' && c != '\t')
      {
        row_started = true;
      }
    }
  }
  if (in_quotes)
  {
    throw Error(ErrorCode::parse, "unterminated quoted cell starting near line " +
                                      std::to_string(current.line));
  }
  if (!cell.empty() || !current.cells.empty() || row_started)
  {
    finish_row();
  }

  if (records.empty())
  {
    throw Error(ErrorCode::empty_dataset, "no header row");
  }
  table.header = std::move(records.front().cells);
  records.erase(records.begin());
  for (auto &row : records)
  {
    if (row.cells.size() != table.header.size())
    {
      throw Error(ErrorCode::parse, "line " + std::to_string(row.line) + ": expected " +
                                        std::to_string(table.header.size()) + " cells, found " +
                                        std::to_string(row.cells.size()));
    }
  }
  table.rows = std::move(records);
  return table;
}

std::string csv_escape(std::string_view cell, char delimiter)
{
  bool const needs_quotes = cell.find_first_of(std::string{'"', '\n', '\r', delimiter}) !=
                                std::string_view::npos ||
                            (!cell.empty() && (cell.front() == ' ' || cell.back() == ' '));
  if (!needs_quotes)
  {
    return std::string{cell};
  }
  std::string out = "\"";
  for (char c : cell)
  {
    if (c == '"')
    {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string read_file(std::filesystem::path const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(std::filesystem::path const &path, std::string_view content)
{
  auto const tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
    {
      throw Error(ErrorCode::io, "short write to '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
  {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  }
}

}  // namespace circex::detail
