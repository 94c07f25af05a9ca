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
#ifndef FDF_CSV_HPP
#define FDF_CSV_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdf
{

struct CsvTable {
    std::string source; // file name, for diagnostics
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; // 1-based line of each row

    /// Column position in the header, if present.
    std::optional<std::size_t> column(std::string_view name) const;
};

/// Minimal RFC 4180 reader: comma separator, optional double quotes, CR/LF
/// line endings, UTF-8 BOM stripped. Blank lines are skipped. Every row must
/// have as many fields as the header (MalformedRow otherwise).
CsvTable parse_csv(std::string_view text, std::string source);
CsvTable read_csv(const std::filesystem::path& path);

/// Header must be exactly `expected` (MalformedRow naming the file otherwise).
void require_header(const CsvTable& table, const std::vector<std::string>& expected);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Shortest representation that round-trips through parse_double.
std::string format_double(double value);
/// printf "%.*g" in the C locale.
std::string format_sig(double value, int significant_digits);

std::optional<double> try_parse_double(std::string_view text);
std::optional<std::int64_t> try_parse_int(std::string_view text);

std::string csv_escape(std::string_view field);

} // namespace fdf

#endif // FDF_CSV_HPP
