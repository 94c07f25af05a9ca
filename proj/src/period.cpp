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
#include "period.hpp"

#include "error.hpp"

#include <charconv>
#include <cstdio>

namespace fdf
{

namespace
{

bool parse_fixed_int(std::string_view text, int& out)
{
    if (text.empty()) {
        return false;
    }
    for (char c : text) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

int days_in_month(int year, int month)
{
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return days[month - 1];
}

} // namespace

Period Period::from_ordinal(long ordinal)
{
    long year  = ordinal >= 0 ? ordinal / 12 : -((-ordinal + 11) / 12);
    long month = ordinal - year * 12;
    return Period{static_cast<int>(year), static_cast<int>(month) + 1};
}

std::string Period::to_string() const
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

Period parse_period(std::string_view text)
{
    int year = 0, month = 0;
    if (text.size() != 7 || text[4] != '-' || !parse_fixed_int(text.substr(0, 4), year) ||
        !parse_fixed_int(text.substr(5, 2), month) || month < 1 || month > 12) {
        fail(ErrorCode::InvalidArgument, "invalid period '" + std::string(text) + "' (expected YYYY-MM)");
    }
    return Period{year, month};
}

Date parse_date(std::string_view text)
{
    int year = 0, month = 0, day = 0;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_fixed_int(text.substr(0, 4), year) ||
        !parse_fixed_int(text.substr(5, 2), month) || !parse_fixed_int(text.substr(8, 2), day) || month < 1 ||
        month > 12 || day < 1 || day > days_in_month(year, month)) {
        fail(ErrorCode::UnparseableDate, "unparseable date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    return Date{year, month, day};
}

PeriodRange::PeriodRange(Period first_, Period last_)
    : first(first_)
    , last(last_)
{
    if (last < first) {
        fail(ErrorCode::EmptyPeriodRange, "empty period range " + first.to_string() + ".." + last.to_string());
    }
}

std::vector<Period> PeriodRange::periods() const
{
    std::vector<Period> out;
    out.reserve(size());
    for (Period p = first; p <= last; p = p.next()) {
        out.push_back(p);
    }
    return out;
}

} // namespace fdf
