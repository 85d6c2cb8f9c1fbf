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

#include "mdinew/records.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mdinew/error.h"
#include "mdinew/state_io.h"

namespace mdinew {

namespace {

std::string quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::pair<std::string, bool>> split_csv_line(const std::string &line) {
    // (cell text, was quoted)
    std::vector<std::pair<std::string, bool>> cells;
    std::string cur;
    bool quoted = false;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back(std::move(cur), quoted);
            cur.clear();
            quoted = false;
        } else {
            cur += c;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::kParse, "unterminated quote in CSV line");
    }
    cells.emplace_back(std::move(cur), quoted);
    return cells;
}

Value parse_cell(const std::string &text, bool quoted) {
    if (quoted) {
        return text;
    }
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    if (text == "nan") {
        return NAN;
    }
    if (text == "inf") {
        return INFINITY;
    }
    if (text == "-inf") {
        return -INFINITY;
    }
    const char *first = text.data();
    const char *last = text.data() + text.size();
    if (text.find_first_of(".eE") == std::string::npos) {
        std::int64_t i = 0;
        auto res = std::from_chars(first, last, i);
        if (res.ec == std::errc() && res.ptr == last) {
            return i;
        }
        std::uint64_t u = 0;
        res = std::from_chars(first, last, u);
        if (res.ec == std::errc() && res.ptr == last) {
            return u;
        }
    } else {
        double d = 0;
        auto res = std::from_chars(first, last, d);
        if (res.ec == std::errc() && res.ptr == last) {
            return d;
        }
    }
    throw Error(ErrorCode::kParse, "unquoted CSV cell '" + text + "' is not a number or bool");
}

}  // namespace

std::string format_value(const Value &v) {
    struct Visitor {
        std::string operator()(std::int64_t i) const {
            return std::to_string(i);
        }
        std::string operator()(std::uint64_t u) const {
            return std::to_string(u);
        }
        std::string operator()(double d) const {
            std::string s = format_double(d);
            if (s.find_first_of(".ein") == std::string::npos) {
                s += ".0";
            }
            return s;
        }
        std::string operator()(bool b) const {
            return b ? "true" : "false";
        }
        std::string operator()(const std::string &s) const {
            return quote(s);
        }
    };
    return std::visit(Visitor{}, v);
}

void ResultTable::add_row(std::vector<Value> row) {
    if (row.size() != columns.size()) {
        throw Error(ErrorCode::kInvalidArgument, "record has " + std::to_string(row.size()) + " values for " +
                                                     std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string to_csv(const ResultTable &table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_value(row[c]);
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json(const ResultTable &table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::visit([&](const auto &v) { obj[table.columns[c]] = v; }, row[c]);
        }
        arr.push_back(std::move(obj));
    }
    nlohmann::ordered_json doc;
    doc["columns"] = table.columns;
    doc["records"] = std::move(arr);
    return doc.dump(2) + "\n";
}

ResultTable parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    ResultTable table;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::kParse, "CSV is empty");
    }
    for (auto &[cell, quoted] : split_csv_line(line)) {
        table.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<Value> row;
        for (auto &[cell, quoted] : split_csv_line(line)) {
            row.push_back(parse_cell(cell, quoted));
        }
        table.add_row(std::move(row));
    }
    return table;
}

void emit(const ResultTable &table, OutputFormat format, const std::filesystem::path &path) {
    const std::string text = format == OutputFormat::kCsv ? to_csv(table) : to_json(table);
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw Error(ErrorCode::kIo, "failed writing to stdout");
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot open output file " + path.string());
    }
    out << text;
    if (!out) {
        throw Error(ErrorCode::kIo, "failed writing output file " + path.string());
    }
}

}  // namespace mdinew
