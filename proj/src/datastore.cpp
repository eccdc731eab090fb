// Copyright 2026 The cuspfusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cuspfusion/datastore.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cuspfusion/error.hpp"

namespace cuspfusion {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string join_fields(const Schema& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  if (field.empty()) return false;
  // from_chars rejects a leading '+', which format_double never emits.
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

DbTable::DbTable(std::string name, Schema columns, std::vector<Row> rows)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty() || columns_.front() != "id") {
    throw SchemaError("table '" + name_ + "': first column must be 'id'");
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (std::count(columns_.begin(), columns_.end(), columns_[i]) != 1) {
      throw SchemaError("table '" + name_ + "': duplicate column '" + columns_[i] + "'");
    }
  }
  for (Row& row : rows) {
    if (row.values.size() + 1 != columns_.size()) {
      throw SchemaError("table '" + name_ + "': row " + std::to_string(row.id) +
                        " has the wrong number of values");
    }
    if (!rows_.emplace(row.id, std::move(row.values)).second) {
      throw SchemaError("table '" + name_ + "': duplicate id " + std::to_string(row.id));
    }
  }
}

std::vector<std::int64_t> DbTable::ids() const {
  std::vector<std::int64_t> out;
  out.reserve(rows_.size());
  for (const auto& [id, values] : rows_) out.push_back(id);
  return out;
}

std::optional<std::size_t> DbTable::value_index(std::string_view column) const {
  for (std::size_t i = 1; i < columns_.size(); ++i) {
    if (columns_[i] == column) return i - 1;
  }
  return std::nullopt;
}

bool DbTable::has_column(std::string_view column) const {
  return std::find(columns_.begin(), columns_.end(), column) != columns_.end();
}

std::vector<double> DbTable::column(std::string_view column) const {
  const auto idx = value_index(column);
  if (!idx) throw SchemaError("table '" + name_ + "' has no column '" + std::string(column) + "'");
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& [id, values] : rows_) out.push_back(values[*idx]);
  return out;
}

SplitTables split(std::span<const Person> population) {
  if (population.empty()) throw DomainError("cannot split an empty population");
  std::vector<DbTable::Row> rows_a, rows_b;
  rows_a.reserve(population.size());
  rows_b.reserve(population.size());
  for (const Person& p : population) {
    rows_a.push_back({p.id, {p.a}});
    rows_b.push_back({p.id, {p.b, static_cast<double>(p.y)}});
  }
  return {DbTable("db_a", kDbASchema, std::move(rows_a)),
          DbTable("db_b", kDbBSchema, std::move(rows_b))};
}

DbTable join(const DbTable& db_a, const DbTable& db_b) {
  const auto ia = db_a.value_index("a");
  const auto ib = db_b.value_index("b");
  if (!ia) throw SchemaError("join: '" + db_a.name() + "' lacks column 'a'");
  if (!ib) throw SchemaError("join: '" + db_b.name() + "' lacks column 'b'");
  const auto iy = db_b.value_index("y");

  std::vector<DbTable::Row> rows;
  const auto& right = db_b.rows();
  for (const auto& [id, left_values] : db_a.rows()) {
    const auto it = right.find(id);
    if (it == right.end()) continue;
    DbTable::Row row{id, {left_values[*ia], it->second[*ib]}};
    if (iy) row.values.push_back(it->second[*iy]);
    rows.push_back(std::move(row));
  }
  return DbTable("joined", iy ? kJoinedSchema : kScoringSchema, std::move(rows));
}

DbTable population_table(std::span<const Person> population) {
  std::vector<DbTable::Row> rows;
  rows.reserve(population.size());
  for (const Person& p : population) {
    rows.push_back({p.id, {p.a, p.b, p.x0, p.x, p.p, static_cast<double>(p.y)}});
  }
  return DbTable("population", kPopulationSchema, std::move(rows));
}

std::vector<Person> population_from_table(const DbTable& table) {
  if (table.columns() != kPopulationSchema) throw SchemaError("not a population table");
  std::vector<Person> out;
  out.reserve(table.size());
  for (const auto& [id, v] : table.rows()) {
    Person p;
    p.id = id;
    p.a = v[0];
    p.b = v[1];
    p.x0 = v[2];
    p.x = v[3];
    p.p = v[4];
    if (v[5] != 0.0 && v[5] != 1.0) throw SchemaError("population: y must be 0 or 1");
    p.y = static_cast<int>(v[5]);
    out.push_back(p);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string to_csv(const DbTable& table) {
  std::string out = join_fields(table.columns());
  out += '\n';
  for (const auto& [id, values] : table.rows()) {
    out += std::to_string(id);
    for (double v : values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

DbTable from_csv(std::string_view text, const Schema& schema, std::string name) {
  std::vector<DbTable::Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (!header_seen) {
      if (line != join_fields(schema)) {
        throw SchemaError("header '" + std::string(line) + "' does not match expected '" +
                          join_fields(schema) + "'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != schema.size()) {
      throw ParseError(line_no, "expected " + std::to_string(schema.size()) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    DbTable::Row row;
    if (!parse_number(fields[0], row.id)) {
      throw ParseError(line_no, "bad id '" + std::string(fields[0]) + "'");
    }
    row.values.resize(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (!parse_number(fields[i], row.values[i - 1])) {
        throw ParseError(line_no, "bad value '" + std::string(fields[i]) + "' in column '" +
                                      schema[i] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw SchemaError("missing header row");
  try {
    return DbTable(std::move(name), schema, std::move(rows));
  } catch (const SchemaError& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void export_csv(const DbTable& table, const std::filesystem::path& path) {
  write_text_file(path, to_csv(table));
}

DbTable import_csv(const std::filesystem::path& path, const Schema& schema) {
  return from_csv(read_text_file(path), schema, path.stem().string());
}

}  // namespace cuspfusion
