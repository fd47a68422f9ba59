#pragma once

// Core value types shared by every analysis stage: fixed-point prices,
// calendar dates, stream keys and the error type thrown by the C++ layer.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uee {

enum class ErrorCode {
    invalid_argument = 1,
    io,
    parse,
    invariant,
    empty_input,
    insufficient_quotes,
    generation,
    overlap,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Decimal price held as an integer count of 1e-8 currency units. Relative
// changes are formed from exact integer differences, so scaling every price
// by a constant leaves all ratios bit-identical.
struct Price {
    static constexpr std::int64_t kScale = 100'000'000;

    std::int64_t units = 0;

    constexpr Price() = default;
    constexpr explicit Price(std::int64_t u) : units(u) {}

    static Price from_double(double value);
    double to_double() const { return static_cast<double>(units) / static_cast<double>(kScale); }

    friend constexpr auto operator<=>(Price, Price) = default;
    friend constexpr Price operator+(Price a, Price b) { return Price{a.units + b.units}; }
    friend constexpr Price operator-(Price a, Price b) { return Price{a.units - b.units}; }
};

// Accepts "91.25", "100", ".5"; at most 8 fractional digits, no exponent.
std::optional<Price> parse_price(std::string_view text);
// Exact decimal rendering with trailing zeros trimmed ("91.25", "100").
std::string format_price(Price p);

// (to - from) / from, evaluated once from exact integer differences.
inline double relative_change(Price from, Price to) {
    return static_cast<double>(to.units - from.units) / static_cast<double>(from.units);
}

struct Date {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    static std::optional<Date> parse(std::string_view text);  // YYYY-MM-DD
    std::string to_string() const;
    std::int64_t days_since_epoch() const;
    static Date from_days(std::int64_t days);

    friend constexpr auto operator<=>(const Date&, const Date&) = default;
};

struct IsoWeek {
    int year = 0;
    unsigned week = 0;

    static IsoWeek of(const Date& d);
    std::string to_string() const;  // "2008-W49"

    friend constexpr auto operator<=>(const IsoWeek&, const IsoWeek&) = default;
};

struct StreamKey {
    std::string symbol;
    std::string venue;
    Date day;

    bool valid() const { return !symbol.empty() && !venue.empty(); }
    std::string to_string() const;  // "AAPL|Q|2008-12-01"

    friend auto operator<=>(const StreamKey&, const StreamKey&) = default;
    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

enum class Direction { crash, spike };

inline std::string_view to_string(Direction d) { return d == Direction::crash ? "crash" : "spike"; }
std::optional<Direction> parse_direction(std::string_view text);

}  // namespace uee
