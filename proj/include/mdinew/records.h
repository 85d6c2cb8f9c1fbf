// Copyright 2026 The mdinew Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MDINEW_RECORDS_H
#define MDINEW_RECORDS_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace mdinew {

using Value = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

std::string format_value(const Value &v);

/// Homogeneous records: every row has one value per column.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    void add_row(std::vector<Value> row);
    bool operator==(const ResultTable &other) const = default;
};

enum class OutputFormat { kCsv, kJson };

std::string to_csv(const ResultTable &table);
std::string to_json(const ResultTable &table);

/// Inverse of to_csv. Quoted cells are strings; others parse as bool,
/// integer (signed when it fits, else unsigned), or double (any cell with
/// '.', 'e', nan or inf).
ResultTable parse_csv(const std::string &text);

/// Writes the table to `path`; an empty path means stdout.
void emit(const ResultTable &table, OutputFormat format, const std::filesystem::path &path);

}  // namespace mdinew

#endif
