#include "uee/tickstore.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

using namespace uee;

TEST_CASE("a trade row maps field by field") {
    const auto p = parse_trades("AAPL,Q,2008-12-01,34200,91.25,100\n");
    REQUIRE(p.ticks.size() == 1);
    CHECK(p.diagnostics.empty());
    const auto& t = p.ticks[0];
    CHECK(t.t == 34200.0);
    CHECK(t.second == 34200);
    CHECK(format_price(t.price) == "91.25");
    CHECK(t.size == 100);
    CHECK(p.keys[p.stream_of[0]].to_string() == "AAPL|Q|2008-12-01");
}

TEST_CASE("zero price is rejected with one diagnostic") {
    const auto p = parse_trades("AAPL,Q,2008-12-01,34200,0,100\n");
    CHECK(p.ticks.empty());
    REQUIRE(p.diagnostics.size() == 1);
    CHECK(p.diagnostics[0].line == 1);
}

TEST_CASE("one malformed row among three") {
    const auto p = parse_trades("AAPL,Q,2008-12-01,34200,91.25,100\n"
                                "AAPL,Q,2008-12-01,34200,abc,100\n"
                                "AAPL,Q,2008-12-01,34201,91.30,200\n");
    CHECK(p.ticks.size() == 2);
    REQUIRE(p.diagnostics.size() == 1);
    CHECK(p.diagnostics[0].line == 2);
    CHECK(p.rows == 3);
}

TEST_CASE("rows violating invariants are rejected") {
    const auto p = parse_trades("A,Q,2008-12-01,34200,-1,100\n"
                                "A,Q,2008-12-01,34200,1,0\n"
                                "A,Q,2008-12-01,34200,1\n"
                                "A,Q,2008-13-01,34200,1,1\n"
                                "A,Q,2008-12-01,99999,1,1\n"
                                ",Q,2008-12-01,34200,1,1\n");
    CHECK(p.ticks.empty());
    CHECK(p.diagnostics.size() == 6);
}

TEST_CASE("header, comments, blank lines and CRLF are tolerated") {
    const auto p = parse_trades("# exported\nsymbol,venue,date,time,price,size\r\n\r\n"
                                "AAPL,Q,2008-12-01,09:30:00,91.25,100\r\n");
    REQUIRE(p.ticks.size() == 1);
    CHECK(p.ticks[0].second == 34200);
    CHECK(p.diagnostics.empty());
}

TEST_CASE("column remapping and tab delimiter") {
    const auto f = FormatDescriptor::from_names("tsv:venue,symbol,_,date,time,size,price");
    const auto p = parse_trades("Q\tAAPL\tjunk\t2008-12-01\t34200\t100\t91.25\n", f);
    REQUIRE(p.ticks.size() == 1);
    CHECK(p.keys[0].symbol == "AAPL");
    CHECK(p.keys[0].venue == "Q");
    CHECK(p.ticks[0].size == 100);
    CHECK(format_price(p.ticks[0].price) == "91.25");
    CHECK_THROWS_AS(parse_trades("", FormatDescriptor::from_names("symbol,venue,date,time")), Error);
    CHECK_THROWS_AS(FormatDescriptor::from_names("symbol,venue,date,time,price,size,colour"), Error);
}

TEST_CASE("quotes keep crossed books and flag them") {
    const auto p = parse_quotes("AAPL,Q,2008-12-01,34200,91.25,91.30\n"
                                "AAPL,Q,2008-12-01,34201,91.40,91.30\n"
                                "AAPL,Q,2008-12-01,34202,0,91.30\n");
    REQUIRE(p.ticks.size() == 2);
    CHECK_FALSE(p.ticks[0].crossed);
    CHECK(p.ticks[1].crossed);
    CHECK(p.diagnostics.size() == 1);
}

namespace {

std::vector<TradeTick> in_second(std::int64_t s, std::size_t m) {
    std::vector<TradeTick> v(m);
    for (std::size_t k = 0; k < m; ++k) {
        v[k].second = s;
        v[k].seq = k;
    }
    return v;
}

}  // namespace

TEST_CASE("trades sharing a second are spread equidistantly") {
    auto four = in_second(34200, 4);
    assign_subsecond_timestamps(std::span<TradeTick>(four));
    CHECK(four[0].t == 34200.0);
    CHECK(four[1].t == 34200.25);
    CHECK(four[2].t == 34200.5);
    CHECK(four[3].t == 34200.75);

    auto one = in_second(34200, 1);
    assign_subsecond_timestamps(std::span<TradeTick>(one));
    CHECK(one[0].t == 34200.0);

    auto ten = in_second(500, 10);
    assign_subsecond_timestamps(std::span<TradeTick>(ten));
    for (std::size_t k = 1; k < ten.size(); ++k) CHECK(ten[k].t - ten[k - 1].t == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("subsecond assignment is order preserving and idempotent") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 50; ++round) {
        std::vector<TradeTick> v;
        std::int64_t s = 1000;
        for (int k = 0; k < 500; ++k) {
            s += std::uniform_int_distribution<int>(0, 2)(rng);
            TradeTick t;
            t.second = s;
            t.seq = static_cast<std::uint64_t>(k);
            v.push_back(t);
        }
        prepare_stream(v);
        for (std::size_t i = 1; i < v.size(); ++i) REQUIRE(v[i].t > v[i - 1].t);
        auto again = v;
        assign_subsecond_timestamps(std::span<TradeTick>(again));
        for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(again[i].t == v[i].t);
    }
}

TEST_CASE("ordering is stable by second then arrival") {
    std::vector<TradeTick> v(4);
    const std::int64_t seconds[] = {5, 3, 5, 3};
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i].second = seconds[i];
        v[i].seq = i;
    }
    order_stream(v);
    CHECK(v[0].seq == 1);
    CHECK(v[1].seq == 3);
    CHECK(v[2].seq == 0);
    CHECK(v[3].seq == 2);
}

TEST_CASE("streams are keyed by symbol, venue and day") {
    auto two = parse_trades("AAPL,Q,2008-12-01,34200,91.25,100\nAAPL,N,2008-12-01,34200,91.25,100\n");
    CHECK(partition_streams(std::move(two)).size() == 2);
    CHECK(partition_streams(parse_trades("")).empty());
}

TEST_CASE("partition is lossless") {
    std::mt19937_64 rng(5);
    const char* keys[] = {"AAPL,Q,2008-12-01", "AAPL,N,2008-12-01", "GS,Q,2008-12-02"};
    std::string csv;
    std::vector<std::string> rows;
    for (int i = 0; i < 1000; ++i) {
        const auto k = std::uniform_int_distribution<int>(0, 2)(rng);
        const auto s = 34200 + std::uniform_int_distribution<int>(0, 300)(rng);
        const auto p = std::uniform_int_distribution<int>(100, 999)(rng);
        rows.push_back(std::string(keys[k]) + "," + std::to_string(s) + "," + std::to_string(p) + ".5," +
                       std::to_string(i + 1));
        csv += rows.back() + "\n";
    }
    auto map = partition_streams(parse_trades(csv));
    CHECK(map.size() == 3);
    std::size_t total = 0;
    std::vector<std::string> back;
    for (auto& [key, ticks] : map) {
        total += ticks.size();
        for (std::size_t i = 1; i < ticks.size(); ++i) REQUIRE(ticks[i].seq > ticks[i - 1].seq);
        for (const auto& t : ticks) {
            back.push_back(key.symbol + "," + key.venue + "," + key.day.to_string() + "," + std::to_string(t.second) +
                           "," + format_price(t.price) + "," + std::to_string(t.size));
        }
    }
    CHECK(total == 1000);
    std::sort(rows.begin(), rows.end());
    std::sort(back.begin(), back.end());
    CHECK(rows == back);
}

TEST_CASE("several files feed one set of streams") {
    ParsedTrades into;
    const auto dir = std::filesystem::temp_directory_path() / "uee_tickstore_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "a.csv") << "AAPL,Q,2008-12-01,34200,91.25,100\n";
        std::ofstream(dir / "b.csv") << "AAPL,Q,2008-12-01,34200,91.26,100\nAAPL,Q,2008-12-01,x,1,1\n";
    }
    load_trades(dir / "a.csv", FormatDescriptor::trades(), into);
    load_trades(dir / "b.csv", FormatDescriptor::trades(), into);
    CHECK(into.keys.size() == 1);
    REQUIRE(into.ticks.size() == 2);
    CHECK(into.ticks[1].seq == 1);
    REQUIRE(into.diagnostics.size() == 1);
    CHECK(into.diagnostics[0].message.find("b.csv") != std::string::npos);
    CHECK_THROWS_AS(load_trades(dir / "missing.csv", FormatDescriptor::trades(), into), Error);
    std::filesystem::remove_all(dir);
}
