#include "epimob/calendar.hpp"

#include <chrono>
#include <cstdio>

#include "epimob/error.hpp"

namespace epimob {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    static const int lens[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lens[m - 1];
}

} // namespace

int64_t Date::serial() const {
    std::chrono::year_month_day ymd{std::chrono::year{year},
                                    std::chrono::month{unsigned(month)},
                                    std::chrono::day{unsigned(day)}};
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

Date Date::from_serial(int64_t days) {
    std::chrono::sys_days sd{std::chrono::days{days}};
    std::chrono::year_month_day ymd{sd};
    return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

int Date::iso_weekday() const {
    // 1970-01-01 was a Thursday.
    int64_t wd = (serial() + 3) % 7; // 0 = Monday
    if (wd < 0) wd += 7;
    return int(wd) + 1;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date parse_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3 ||
        text.size() != 10) {
        throw input_error("malformed date '" + text + "' (expected YYYY-MM-DD)");
    }
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) {
        throw input_error("invalid calendar date '" + text + "'");
    }
    return Date{y, m, d};
}

int weeks_in_iso_year(int iso_year) {
    // 53-week years are those where Jan 1 is a Thursday, or a Wednesday in
    // a leap year.
    int wd = Date{iso_year, 1, 1}.iso_weekday();
    if (wd == 4) return 53;
    if (wd == 3 && is_leap(iso_year)) return 53;
    return 52;
}

IsoWeek iso_week_of(const Date& d) {
    // Ordinal-date formula: week = floor((ordinal - weekday + 10) / 7).
    int64_t ordinal = d.serial() - Date{d.year, 1, 1}.serial() + 1;
    int week = int((ordinal - d.iso_weekday() + 10) / 7);
    if (week < 1) {
        return IsoWeek{d.year - 1, weeks_in_iso_year(d.year - 1)};
    }
    if (week > weeks_in_iso_year(d.year)) {
        return IsoWeek{d.year + 1, 1};
    }
    return IsoWeek{d.year, week};
}

Date IsoWeek::start_date() const {
    // Jan 4 is always in ISO week 1; step back to its Monday.
    Date jan4{year, 1, 4};
    Date week1_monday = jan4.plus_days(1 - jan4.iso_weekday());
    return week1_monday.plus_days(7 * int64_t(week - 1));
}

IsoWeek IsoWeek::next() const {
    if (week < weeks_in_iso_year(year)) return IsoWeek{year, week + 1};
    return IsoWeek{year + 1, 1};
}

IsoWeek IsoWeek::prev() const {
    if (week > 1) return IsoWeek{year, week - 1};
    return IsoWeek{year - 1, weeks_in_iso_year(year - 1)};
}

IsoWeek IsoWeek::plus_weeks(int n) const {
    return iso_week_of(start_date().plus_days(7 * int64_t(n)));
}

std::string IsoWeek::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-W%02d", year, week);
    return buf;
}

IsoWeek parse_iso_week(const std::string& text) {
    int y = 0, w = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%4d-W%2d%c", &y, &w, &extra) != 2 ||
        text.size() != 8) {
        throw input_error("malformed ISO week '" + text + "' (expected YYYY-Www)");
    }
    if (w < 1 || w > weeks_in_iso_year(y)) {
        throw input_error("invalid ISO week '" + text + "'");
    }
    return IsoWeek{y, w};
}

int week_diff(const IsoWeek& a, const IsoWeek& b) {
    return int((b.start_date().serial() - a.start_date().serial()) / 7);
}

} // namespace epimob
