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
#ifndef FDF_PERIOD_HPP
#define FDF_PERIOD_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fdf
{

/// A calendar month. Ordering and arithmetic go through the month ordinal
/// (year * 12 + month - 1), so successor/predecessor wrap across years.
struct Period {
    int year  = 1970;
    int month = 1;

    static Period from_ordinal(long ordinal);
    long ordinal() const
    {
        return static_cast<long>(year) * 12 + (month - 1);
    }

    Period operator+(long months) const
    {
        return from_ordinal(ordinal() + months);
    }
    Period operator-(long months) const
    {
        return from_ordinal(ordinal() - months);
    }
    long operator-(const Period& other) const
    {
        return ordinal() - other.ordinal();
    }

    Period next() const
    {
        return *this + 1;
    }
    Period prev() const
    {
        return *this - 1;
    }

    friend bool operator==(const Period& a, const Period& b) = default;
    friend std::strong_ordering operator<=>(const Period& a, const Period& b)
    {
        return a.ordinal() <=> b.ordinal();
    }

    /// "YYYY-MM"
    std::string to_string() const;
};

/// Parses "YYYY-MM" (InvalidArgument otherwise).
Period parse_period(std::string_view text);

struct Date {
    int year  = 1970;
    int month = 1;
    int day   = 1;

    Period period() const
    {
        return Period{year, month};
    }
};

/// Parses "YYYY-MM-DD" with day-of-month validation (UnparseableDate).
Date parse_date(std::string_view text);

/// Inclusive range of months.
struct PeriodRange {
    Period first;
    Period last;

    PeriodRange() = default;
    PeriodRange(Period first_, Period last_);

    std::size_t size() const
    {
        return static_cast<std::size_t>(last - first + 1);
    }
    bool contains(const Period& p) const
    {
        return first <= p && p <= last;
    }
    /// Position of p relative to `first`; may be negative or past the end.
    long offset(const Period& p) const
    {
        return p - first;
    }
    Period at(std::size_t i) const
    {
        return first + static_cast<long>(i);
    }
    std::vector<Period> periods() const;

    friend bool operator==(const PeriodRange&, const PeriodRange&) = default;
};

} // namespace fdf

#endif // FDF_PERIOD_HPP
