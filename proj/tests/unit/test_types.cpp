#include "uee/types.hpp"

#include <doctest.h>

using namespace uee;

TEST_CASE("prices parse to exact fixed point") {
    CHECK(parse_price("91.25")->units == 9'125'000'000);
    CHECK(parse_price("100")->units == 10'000'000'000);
    CHECK(parse_price(".5")->units == 50'000'000);
    CHECK(parse_price("0.00000001")->units == 1);
    CHECK(parse_price("-1.5")->units == -150'000'000);
}

TEST_CASE("malformed prices are rejected") {
    CHECK_FALSE(parse_price(""));
    CHECK_FALSE(parse_price("abc"));
    CHECK_FALSE(parse_price("1.2.3"));
    CHECK_FALSE(parse_price("1e5"));
    CHECK_FALSE(parse_price("0.000000001"));  // nine decimals
    CHECK_FALSE(parse_price("12345678901"));
}

TEST_CASE("format_price round-trips and trims zeros") {
    CHECK(format_price(*parse_price("91.25")) == "91.25");
    CHECK(format_price(*parse_price("100.000")) == "100");
    CHECK(format_price(*parse_price("0.00000001")) == "0.00000001");
    CHECK(format_price(Price{-150'000'000}) == "-1.5");
    for (const char* s : {"1", "29.38024811", "0.1", "12345.6789"}) CHECK(format_price(*parse_price(s)) == s);
}

TEST_CASE("relative change uses the starting price as base") {
    CHECK(relative_change(*parse_price("100"), *parse_price("99.1")) == doctest::Approx(-0.009).epsilon(1e-15));
    CHECK(relative_change(*parse_price("50"), *parse_price("52")) == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(relative_change(*parse_price("100"), *parse_price("100")) == 0.0);
}

TEST_CASE("relative change is bit-identical under exact price scaling") {
    const Price a = *parse_price("37.13"), b = *parse_price("36.81");
    for (std::int64_t c : {1, 3, 100, 7919}) CHECK(relative_change(Price{a.units * c}, Price{b.units * c}) == relative_change(a, b));
}

TEST_CASE("dates parse and validate") {
    const auto d = Date::parse("2008-12-01");
    REQUIRE(d);
    CHECK(d->year == 2008);
    CHECK(d->month == 12u);
    CHECK(d->day == 1u);
    CHECK(d->to_string() == "2008-12-01");
    CHECK_FALSE(Date::parse("2008-02-30"));
    CHECK_FALSE(Date::parse("2008-13-01"));
    CHECK_FALSE(Date::parse("20081201"));
    CHECK(Date::from_days(d->days_since_epoch()) == *d);
    CHECK(Date::parse("1970-01-01")->days_since_epoch() == 0);
}

TEST_CASE("ISO weeks follow the Thursday rule") {
    CHECK(IsoWeek::of(*Date::parse("2008-12-01")).to_string() == "2008-W49");
    CHECK(IsoWeek::of(*Date::parse("2008-12-29")).to_string() == "2009-W01");
    CHECK(IsoWeek::of(*Date::parse("2010-01-03")).to_string() == "2009-W53");
    CHECK(IsoWeek::of(*Date::parse("2008-01-01")).to_string() == "2008-W01");
}

TEST_CASE("stream keys compare component-wise") {
    const StreamKey a{"AAPL", "Q", *Date::parse("2008-12-01")};
    StreamKey b = a;
    CHECK(a == b);
    b.venue = "N";
    CHECK_FALSE(a == b);
    CHECK(b < a);
    CHECK(a.to_string() == "AAPL|Q|2008-12-01");
    CHECK_FALSE(StreamKey{}.valid());
}
