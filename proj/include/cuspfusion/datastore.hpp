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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cuspfusion/sampler.hpp"

namespace cuspfusion {

using Schema = std::vector<std::string>;

// Column layouts of the exchanged files. The key column always comes first.
inline const Schema kDbASchema{"id", "a"};
inline const Schema kDbBSchema{"id", "b", "y"};
inline const Schema kJoinedSchema{"id", "a", "b", "y"};
inline const Schema kScoringSchema{"id", "a", "b"};
inline const Schema kPopulationSchema{"id", "a", "b", "x0", "x", "p", "y"};

/// A provider's table: integer key column "id" plus real-valued columns.
/// Immutable once built; rows iterate in ascending id order.
class DbTable {
 public:
  struct Row {
    std::int64_t id = 0;
    std::vector<double> values;  // aligned with columns()[1..]
  };

  DbTable() = default;

  /// Throws SchemaError if the first column is not "id", a column name
  /// repeats, a row has the wrong arity, or an id repeats.
  DbTable(std::string name, Schema columns, std::vector<Row> rows = {});

  const std::string& name() const noexcept { return name_; }
  const Schema& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  const std::map<std::int64_t, std::vector<double>>& rows() const noexcept { return rows_; }

  std::vector<std::int64_t> ids() const;

  /// Index into a row's value vector, or nullopt (also for "id").
  std::optional<std::size_t> value_index(std::string_view column) const;
  bool has_column(std::string_view column) const;

  /// Column values in row order. Throws SchemaError if absent.
  std::vector<double> column(std::string_view column) const;

  bool operator==(const DbTable& other) const {
    return columns_ == other.columns_ && rows_ == other.rows_;
  }

 private:
  std::string name_;
  Schema columns_;
  std::map<std::int64_t, std::vector<double>> rows_;
};

struct SplitTables {
  DbTable db_a;  // id, a
  DbTable db_b;  // id, b, y
};

/// Projects a population onto the two providers' tables. The latent x0, x
/// and p stay behind. Throws DomainError on an empty population.
SplitTables split(std::span<const Person> population);

/// Inner join on id, ascending id order. Produces (id, a, b, y) when db_b
/// carries y and (id, a, b) otherwise. Throws SchemaError if db_a lacks "a"
/// or db_b lacks "b".
DbTable join(const DbTable& db_a, const DbTable& db_b);

DbTable population_table(std::span<const Person> population);
std::vector<Person> population_from_table(const DbTable& table);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

std::string to_csv(const DbTable& table);

/// Header must equal the schema exactly. Throws SchemaError on a header
/// mismatch and ParseError (with a 1-based line number) on bad rows.
DbTable from_csv(std::string_view text, const Schema& schema, std::string name = {});

void export_csv(const DbTable& table, const std::filesystem::path& path);
DbTable import_csv(const std::filesystem::path& path, const Schema& schema);

/// Whole-file helpers shared by the other writers.
void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cuspfusion
