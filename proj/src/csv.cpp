/*
 * Copyright (C) 2026 The fdf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "csv.hpp"

#include "error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdf
{

std::optional<std::size_t> CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

CsvTable parse_csv(std::string_view text, std::string source)
{
    CsvTable table;
    table.source = std::move(source);
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
        text.remove_prefix(3);
    }

    std::vector<std::string> fields;
    std::string field;
    bool in_quotes     = false;
    bool field_quoted  = false;
    bool have_header   = false;
    std::size_t line   = 1;
    std::size_t start  = 1;
    bool line_has_data = false;

    auto end_record = [&]() {
        fields.push_back(std::move(field));
        field.clear();
        bool blank = !line_has_data && fields.size() == 1 && fields[0].empty();
        if (!blank) {
            if (!have_header) {
                table.header = std::move(fields);
                have_header  = true;
            }
            else {
                if (fields.size() != table.header.size()) {
                    fail(ErrorCode::MalformedRow, table.source + ": row at line " + std::to_string(start) + " has " +
                                                      std::to_string(fields.size()) + " fields, expected " +
                                                      std::to_string(table.header.size()));
                }
                table.rows.push_back(std::move(fields));
                table.line_numbers.push_back(start);
            }
        }
        fields.clear();
        line_has_data = false;
        field_quoted  = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                }
                else {
                    in_quotes = false;
                }
            }
            else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_quoted) {
                fail(ErrorCode::MalformedRow,
                     table.source + ": stray quote at line " + std::to_string(line));
            }
            in_quotes     = true;
            field_quoted  = true;
            line_has_data = true;
            break;
        case ',':
            fields.push_back(std::move(field));
            field.clear();
            field_quoted  = false;
            line_has_data = true;
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            ++line;
            start = line;
            break;
        default:
            field.push_back(c);
            line_has_data = true;
        }
    }
    if (in_quotes) {
        fail(ErrorCode::MalformedRow, table.source + ": unterminated quote starting at line " + std::to_string(start));
    }
    if (line_has_data || !field.empty()) {
        end_record();
    }
    if (!have_header) {
        fail(ErrorCode::MalformedRow, table.source + ": missing header");
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    return parse_csv(read_file(path), path.filename().string());
}

void require_header(const CsvTable& table, const std::vector<std::string>& expected)
{
    if (table.header != expected) {
        std::string want;
        for (const auto& h : expected) {
            want += (want.empty() ? "" : ",") + h;
        }
        std::string got;
        for (const auto& h : table.header) {
            got += (got.empty() ? "" : ",") + h;
        }
        fail(ErrorCode::MalformedRow, table.source + ": header '" + got + "' does not match '" + want + "'");
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        fail(ErrorCode::Io, "write failed for " + path.string());
    }
}

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf, ptr);
}

std::string format_sig(double value, int significant_digits)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

std::optional<double> try_parse_double(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<std::int64_t> try_parse_int(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    if (text.empty()) {
        return std::nullopt;
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        }
        else {
            out.push_back(c);
        }
    }
    out += '"';
    return out;
}

} // namespace fdf
