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


#include "table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace qecsense::cli {

namespace {

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool needs_quotes(const std::string& s) {
  if (s.empty()) return false;
  if (s.find_first_of(",\"\r\n") != std::string::npos) return true;
  if (s.front() == ' ' || s.back() == ' ' || s.front() == '#') return true;
  double tmp;
  return parse_number(s, tmp);
}

std::string csv_field(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return csv_field(std::get<std::string>(c));
}

std::string json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return format_double(*d);
    return nlohmann::json(format_double(*d)).dump();
  }
  return nlohmann::json(std::get<std::string>(c)).dump();
}

// RFC 4180 record splitter. Returns the fields and whether each was quoted.
struct Field {
  std::string text;
  bool quoted = false;
};

std::vector<Field> split_record(std::string_view line, std::size_t lineno) {
  std::vector<Field> fields(1);
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    Field& f = fields.back();
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          f.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        f.text += c;
      }
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c == '"' && f.text.empty() && !f.quoted) {
      in_quotes = true;
      f.quoted = true;
    } else {
      f.text += c;
    }
  }
  if (in_quotes) throw std::runtime_error("csv line " + std::to_string(lineno) + ": unterminated quote");
  return fields;
}

}  // namespace

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(s) + "' (expected csv or json)");
}

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("Table::add_row: row width " + std::to_string(row.size()) + " != " +
                           std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::vector<double> Table::numeric_column(std::string_view name) const {
  const std::size_t j = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (const auto* d = std::get_if<double>(&r[j])) {
      out.push_back(*d);
      continue;
    }
    const auto& s = std::get<std::string>(r[j]);
    double v;
    if (s == "true") v = 1.0;
    else if (s == "false") v = 0.0;
    else if (!parse_number(s, v)) throw std::runtime_error("column '" + std::string(name) + "' is not numeric");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Table::text_column(std::string_view name) const {
  const std::size_t j = column_index(name);
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (const auto* d = std::get_if<double>(&r[j])) out.push_back(format_double(*d));
    else out.push_back(std::get<std::string>(r[j]));
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (const auto& m : t.metadata) out += "# " + m.dump() + "\n";
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (j) out += ',';
    out += csv_field(t.columns[j]);
  }
  out += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out += ',';
      out += csv_cell(r[j]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  std::string out = "{\n  \"metadata\": [";
  for (std::size_t i = 0; i < t.metadata.size(); ++i)
    out += (i ? ",\n    " : "\n    ") + t.metadata[i].dump();
  out += t.metadata.empty() ? "],\n" : "\n  ],\n";
  out += "  \"columns\": " + nlohmann::json(t.columns).dump() + ",\n  \"rows\": [";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out += i ? ",\n    [" : "\n    [";
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      if (j) out += ',';
      out += json_cell(t.rows[i][j]);
    }
    out += ']';
  }
  out += t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string render(const Table& t, Format f) { return f == Format::csv ? to_csv(t) : to_json(t); }

Table parse_csv(std::string_view text) {
  Table t;
  std::size_t pos = 0, lineno = 0;
  bool header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header && line.starts_with("#")) {
      std::string_view body = line.substr(1);
      if (body.starts_with(" ")) body.remove_prefix(1);
      t.metadata.push_back(nlohmann::json::parse(body));
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_record(line, lineno);
    if (!header) {
      for (auto& f : fields) t.columns.push_back(std::move(f.text));
      header = true;
      continue;
    }
    if (fields.size() != t.columns.size())
      throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(t.columns.size()) + " fields, got " + std::to_string(fields.size()));
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& f : fields) {
      double v;
      if (!f.quoted && parse_number(f.text, v)) row.emplace_back(v);
      else row.emplace_back(std::move(f.text));
    }
    t.rows.push_back(std::move(row));
  }
  if (!header) throw std::runtime_error("csv: missing header row");
  return t;
}

Table parse_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  Table t;
  for (const auto& m : j.at("metadata")) t.metadata.push_back(m);
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      if (c.is_number()) row.emplace_back(c.get<double>());
      else if (c.is_string()) {
        // Non-finite numbers are written as these strings.
        const auto str = c.get<std::string>();
        if (str == "inf") row.emplace_back(INFINITY);
        else if (str == "-inf") row.emplace_back(-INFINITY);
        else if (str == "nan" || str == "-nan") row.emplace_back(NAN);
        else row.emplace_back(str);
      }
      else throw std::runtime_error("json: unsupported cell type");
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table parse_table(std::string_view text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  if (p != std::string_view::npos && text[p] == '{') return parse_json(text);
  return parse_csv(text);
}

void write_output(const std::filesystem::path& path, const std::string& content) {
  if (path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
    return;
  }
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace qecsense::cli
