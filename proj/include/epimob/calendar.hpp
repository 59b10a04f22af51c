#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace epimob {

/// Calendar date. Serial day arithmetic uses days since 1970-01-01.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    int64_t serial() const;
    static Date from_serial(int64_t days);

    Date plus_days(int64_t n) const { return from_serial(serial() + n); }

    /// ISO-8601 weekday, Monday=1 .. Sunday=7.
    int iso_weekday() const;

    auto operator<=>(const Date& other) const {
        return serial() <=> other.serial();
    }
    bool operator==(const Date& other) const = default;

    std::string to_string() const; // YYYY-MM-DD
};

/// Parse YYYY-MM-DD. Throws input_error on malformed or invalid dates.
Date parse_date(const std::string& text);

/// ISO-8601 week (the week convention used throughout the toolkit).
struct IsoWeek {
    int year = 1970;
    int week = 1;

    auto operator<=>(const IsoWeek&) const = default;

    IsoWeek next() const;
    IsoWeek prev() const;
    IsoWeek plus_weeks(int n) const;

    /// Monday of this ISO week.
    Date start_date() const;

    std::string to_string() const; // YYYY-Www
};

/// ISO week containing a calendar date.
IsoWeek iso_week_of(const Date& d);

/// 52 or 53.
int weeks_in_iso_year(int iso_year);

/// Parse YYYY-Www. Throws input_error on malformed input.
IsoWeek parse_iso_week(const std::string& text);

/// Whole weeks from a to b (b - a).
int week_diff(const IsoWeek& a, const IsoWeek& b);

} // namespace epimob
