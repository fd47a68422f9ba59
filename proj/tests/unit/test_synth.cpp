#include "uee/synth.hpp"

#include "uee/mechanism.hpp"
#include "uee/recovery.hpp"

#include "../support/streams.hpp"

#include <doctest.h>

using namespace uee;
using namespace uee::test;

namespace {

SynthStream background(std::uint64_t seed, std::size_t length = 4000) {
    BackgroundParams p;
    p.seed = seed;
    p.length = length;
    return generate_background(kKey, p);
}

InjectionSpec crash_at(std::int64_t second) {
    InjectionSpec s;
    s.start_second = second;
    s.direction = Direction::crash;
    s.n_trades = 11;
    s.relative_change = 0.009;
    s.trades_per_second = 11;
    s.eta_path = {0.3, 0.5, 0.7};
    return s;
}

}  // namespace

TEST_CASE("background generation is a pure function of the seed") {
    const auto a = background(42), b = background(42), c = background(43);
    REQUIRE(a.trades.size() == 4000);
    CHECK(a.quotes.size() == a.trades.size());
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.trades.size(); ++i) {
        same &= a.trades[i].price == b.trades[i].price && a.trades[i].t == b.trades[i].t;
        differs |= a.trades[i].price != c.trades[i].price;
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("zero volatility gives a constant price and no events") {
    BackgroundParams p;
    p.volatility = 0.0;
    p.length = 2000;
    const auto s = generate_background(kKey, p);
    for (const auto& t : s.trades) REQUIRE(t.price == s.trades.front().price);
    CHECK(oracle_detect(kKey, s.trades).empty());
}

TEST_CASE("backgrounds are event free") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) CHECK(oracle_detect(kKey, background(seed).trades).empty());
}

TEST_CASE("an injected crash is found with exact boundaries") {
    InjectedStream s(background(5));
    const auto g = s.inject(crash_at(34500));
    CHECK(g.end_index - g.start_index + 1 == 11);
    const auto& trades = s.stream().trades;
    CHECK(trades[g.start_index].second == 34500);
    const auto events = oracle_detect(kKey, trades);
    REQUIRE(events.size() == 1);
    CHECK(events[0].start_index == g.start_index);
    CHECK(events[0].end_index == g.end_index);
    CHECK(events[0].direction == Direction::crash);
    CHECK(events[0].end_trigger == EndTrigger::trend_reversal);
    CHECK(events[0].size == g.size);
    CHECK(events[0].t0_rec - events[0].t0_uee <= 1.0);
    CHECK(detect_uees(kKey, trades) == events);
}

TEST_CASE("pause-ended injections") {
    InjectedStream s(background(6));
    auto spec = crash_at(34600);
    spec.direction = Direction::spike;
    spec.end_trigger = EndTrigger::trading_pause;
    const auto g = s.inject(spec);
    const auto events = oracle_detect(kKey, s.stream().trades);
    REQUIRE(events.size() == 1);
    CHECK(events[0].end_trigger == EndTrigger::trading_pause);
    CHECK(events[0].end_index == g.end_index);
    CHECK(events[0].direction == Direction::spike);
}

TEST_CASE("one trade short of the criterion is not an event") {
    InjectedStream s(background(7));
    auto spec = crash_at(34500);
    spec.n_trades = 9;
    spec.relative_change = 0.012;
    spec.expect_detected = false;
    s.inject(spec);
    CHECK(oracle_detect(kKey, s.stream().trades).empty());
}

TEST_CASE("designed eta path is reproduced") {
    InjectedStream s(background(8));
    auto spec = crash_at(34700);
    spec.eta_path = {0.25, 1.0, -0.5, 1.75, 0.0};
    const auto g = s.inject(spec);
    const auto events = detect_uees(kKey, s.stream().trades);
    REQUIRE(events.size() == 1);
    const auto p = recovery_profile(s.stream().trades, events[0], 5);
    REQUIRE(p.etas.size() == 5);
    for (std::size_t n = 0; n < 5; ++n) CHECK(p.etas[n] == g.etas[n]);
    CHECK(g.etas[1] == 1.0);
}

TEST_CASE("a single -0.9% quote jump classifies as dominant") {
    InjectedStream s(background(9));
    auto spec = crash_at(34800);
    spec.quote_profile = QuoteProfile::single_step;
    spec.quote_jump = 0.009;
    const auto g = s.inject(spec);
    const auto events = detect_uees(kKey, s.stream().trades);
    REQUIRE(events.size() == 1);
    const double jump = max_quote_jump(s.stream().quotes, events[0]);
    CHECK(jump == g.max_jump);
    CHECK(jump == doctest::Approx(-0.009).epsilon(1e-12));
    CHECK(classify_regime(jump) == Regime::single_order_dominant);
}

TEST_CASE("overlapping and unrealisable injections are refused") {
    InjectedStream s(background(10));
    s.inject(crash_at(34500));
    try {
        s.inject(crash_at(34502));
        FAIL("expected overlap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::overlap);
    }
    auto bad = crash_at(35000);
    bad.eta_path = {0.0};
    CHECK_THROWS_AS(s.inject(bad), Error);
    bad = crash_at(35000);
    bad.trades_per_second = 1;
    CHECK_THROWS_AS(s.inject(bad), Error);
    CHECK(s.truth().size() == 1);
}

TEST_CASE("later injections keep earlier ground truth indices current") {
    InjectedStream s(background(11));
    s.inject(crash_at(35000));
    auto spec = crash_at(34500);
    spec.direction = Direction::spike;
    s.inject(spec);
    const auto events = oracle_detect(kKey, s.stream().trades);
    REQUIRE(events.size() == 2);
    const auto& truth = s.truth();
    CHECK(events[1].start_index == truth[0].start_index);
    CHECK(events[0].start_index == truth[1].start_index);
}

TEST_CASE("reference detector edge cases") {
    CHECK(oracle_detect(kKey, {}).empty());
    const auto trades = evenly(ramp(100.0, 99.1, 11), 0.0, 0.1);
    const auto e = oracle_detect(kKey, trades);
    REQUIRE(e.size() == 1);
    CHECK(e[0].start_index == 0);
    CHECK(e[0].end_index == 10);
    CHECK(e[0].end_trigger == EndTrigger::stream_end);
}

TEST_CASE("bundles are deterministic and carry their ground truth") {
    BundleConfig c;
    c.seed = 3;
    c.symbols = 2;
    c.venues = 2;
    c.days = 1;
    c.trades_per_stream = 3000;
    c.events = 6;
    c.near_misses = 6;
    const auto a = generate_bundle(c), b = generate_bundle(c);
    REQUIRE(a.streams.size() == 4);
    CHECK(a.truth.size() == 12);
    for (std::size_t i = 0; i < a.streams.size(); ++i) {
        REQUIRE(a.streams[i].trades.size() == b.streams[i].trades.size());
        for (std::size_t k = 0; k < a.streams[i].trades.size(); ++k)
            REQUIRE(a.streams[i].trades[k].price == b.streams[i].trades[k].price);
    }
    std::size_t expected = 0, found = 0;
    for (const auto& s : a.streams) {
        const auto events = oracle_detect(s.key, s.trades);
        found += events.size();
        for (const auto& g : a.truth) {
            if (!(g.key == s.key)) continue;
            bool hit = false;
            for (const auto& e : events) hit |= e.start_index == g.start_index && e.end_index == g.end_index;
            CHECK(hit == g.expect_detected);
            expected += g.expect_detected;
        }
    }
    CHECK(found == expected);
    CHECK(expected == 6);
}

TEST_CASE("fuzzed streams are valid and seed deterministic") {
    const auto a = fuzz_stream(77, 5000), b = fuzz_stream(77, 5000);
    REQUIRE(a.size() == 5000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].price == b[i].price);
        REQUIRE(a[i].price.units > 0);
        if (i > 0) REQUIRE(a[i].t > a[i - 1].t);
    }
}
