// Copyright 2026 The qec-sense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Tabular artifacts: a block of JSON metadata lines, a header and rows.
// CSV is the default layout (metadata as '#'-prefixed JSON lines), JSON the
// alternative. Parsing either format and writing it back is byte-identical.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace qecsense::cli {

using Cell = std::variant<double, std::string>;

enum class Format { csv, json };

Format parse_format(std::string_view s);
std::string_view to_string(Format f);

struct Table {
  std::vector<nlohmann::json> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(std::string_view name) const;
  // Numeric view of a column. String cells go through strtod ("true" is 1).
  std::vector<double> numeric_column(std::string_view name) const;
  std::vector<std::string> text_column(std::string_view name) const;
};

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double x);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);
std::string render(const Table& t, Format f);

Table parse_csv(std::string_view text);
Table parse_json(std::string_view text);
// Picks the layout from the first non-blank character.
Table parse_table(std::string_view text);

// "-" writes to stdout. Otherwise the file is written next to the target and
// renamed over it, so a failed run never leaves a truncated artifact.
void write_output(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace qecsense::cli
