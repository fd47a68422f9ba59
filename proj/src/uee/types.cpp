#include "uee/types.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace uee {

Price Price::from_double(double value) {
    return Price{static_cast<std::int64_t>(std::llround(value * static_cast<double>(kScale)))};
}

std::optional<Price> parse_price(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::int64_t whole = 0;
    std::size_t whole_digits = 0;
    for (; pos < text.size() && text[pos] != '.'; ++pos) {
        const char c = text[pos];
        if (c < '0' || c > '9') return std::nullopt;
        if (++whole_digits > 10) return std::nullopt;
        whole = whole * 10 + (c - '0');
    }
    std::int64_t frac = 0;
    std::size_t frac_digits = 0;
    if (pos < text.size()) {
        ++pos;  // '.'
        for (; pos < text.size(); ++pos) {
            const char c = text[pos];
            if (c < '0' || c > '9') return std::nullopt;
            if (++frac_digits > 8) return std::nullopt;
            frac = frac * 10 + (c - '0');
        }
    }
    if (whole_digits == 0 && frac_digits == 0) return std::nullopt;
    for (std::size_t k = frac_digits; k < 8; ++k) frac *= 10;
    const std::int64_t units = whole * Price::kScale + frac;
    return Price{negative ? -units : units};
}

std::string format_price(Price p) {
    const bool negative = p.units < 0;
    const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-p.units) : static_cast<std::uint64_t>(p.units);
    const std::uint64_t whole = mag / Price::kScale;
    std::uint64_t frac = mag % Price::kScale;
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%08llu", static_cast<unsigned long long>(frac));
        std::string digits(buf);
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto digits = [&](std::size_t from, std::size_t len) -> std::optional<int> {
        int v = 0;
        for (std::size_t k = from; k < from + len; ++k) {
            if (text[k] < '0' || text[k] > '9') return std::nullopt;
            v = v * 10 + (text[k] - '0');
        }
        return v;
    };
    const auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
    if (!y || !m || !d) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d)};
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    return buf;
}

std::int64_t Date::days_since_epoch() const {
    const std::chrono::sys_days sd{std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                                              std::chrono::day{day}}};
    return sd.time_since_epoch().count();
}

Date Date::from_days(std::int64_t days) {
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day())};
}

IsoWeek IsoWeek::of(const Date& d) {
    using namespace std::chrono;
    const sys_days sd{days{d.days_since_epoch()}};
    // The ISO year is the year of the Thursday in the same Monday-based week.
    const unsigned iso_dow = weekday{sd}.iso_encoding();  // Mon=1 .. Sun=7
    const sys_days thursday = sd + days{4 - static_cast<int>(iso_dow)};
    const std::chrono::year iso_year = year_month_day{thursday}.year();
    const sys_days jan1{iso_year / January / 1};
    const auto week = static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
    return IsoWeek{static_cast<int>(iso_year), week};
}

std::string IsoWeek::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-W%02u", year, week);
    return buf;
}

std::string StreamKey::to_string() const { return symbol + "|" + venue + "|" + day.to_string(); }

std::optional<Direction> parse_direction(std::string_view text) {
    if (text == "crash") return Direction::crash;
    if (text == "spike") return Direction::spike;
    return std::nullopt;
}

}  // namespace uee
