#pragma once

// Stream builders and transforms shared by the unit and acceptance suites.

#include "uee/detector.hpp"
#include "uee/synth.hpp"
#include "uee/tickstore.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uee::test {

inline const StreamKey kKey{"TEST", "Q", Date{2008, 12, 1}};

inline Price px(const char* text) { return *parse_price(text); }

// Trades at explicit fractional times.
inline std::vector<TradeTick> at_times(const std::vector<double>& prices, const std::vector<double>& times) {
    std::vector<TradeTick> out;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        TradeTick t;
        t.second = static_cast<std::int64_t>(times[i]);
        t.t = times[i];
        t.price = Price::from_double(prices[i]);
        t.size = 100;
        t.seq = i;
        out.push_back(t);
    }
    return out;
}

// n trades evenly spaced by `gap` seconds from `t0`.
inline std::vector<TradeTick> evenly(const std::vector<double>& prices, double t0, double gap) {
    std::vector<double> times;
    for (std::size_t i = 0; i < prices.size(); ++i) times.push_back(t0 + gap * static_cast<double>(i));
    return at_times(prices, times);
}

// Linear path from `from` to `to` in n trades, rounded to cents.
inline std::vector<double> ramp(double from, double to, std::size_t n) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

inline std::vector<TradeTick> scaled(std::vector<TradeTick> trades, std::int64_t num, std::int64_t den) {
    for (auto& t : trades) t.price.units = t.price.units * num / den;
    return trades;
}

// Integer-second shift with timestamps reassigned from the shifted seconds.
inline std::vector<TradeTick> shifted(std::vector<TradeTick> trades, std::int64_t seconds) {
    for (auto& t : trades) t.second += seconds;
    assign_subsecond_timestamps(std::span<TradeTick>(trades));
    return trades;
}

// S -> 2c - S with c above every price, so all mirrored prices stay positive.
inline std::vector<TradeTick> mirrored(std::vector<TradeTick> trades) {
    std::int64_t top = 0;
    for (const auto& t : trades) top = std::max(top, t.price.units);
    for (auto& t : trades) t.price.units = 2 * top - t.price.units + Price::kScale;
    return trades;
}

inline Direction flip(Direction d) { return d == Direction::crash ? Direction::spike : Direction::crash; }

// ends[i]: trade i closes a directional segment (pause, reversal or end of data).
inline std::vector<bool> segment_ends(std::span<const TradeTick> trades, double pause) {
    std::vector<bool> ends(trades.size(), false);
    int dir = 0;
    for (std::size_t i = 0; i < trades.size(); ++i) {
        if (i + 1 == trades.size() || is_pause(trades[i + 1].t - trades[i].t, pause)) {
            ends[i] = true;
            dir = 0;
            continue;
        }
        const int s = (trades[i + 1].price > trades[i].price) - (trades[i + 1].price < trades[i].price);
        if (s != 0 && dir != 0 && s != dir) {
            ends[i] = true;
            dir = 0;
        } else if (s != 0) {
            dir = s;
        }
    }
    return ends;
}

inline std::string describe(const UeeEvent& e) {
    return std::string(to_string(e.direction)) + "[" + std::to_string(e.start_index) + "," +
           std::to_string(e.end_index) + "] " + std::string(to_string(e.end_trigger));
}

inline std::string describe(const std::vector<UeeEvent>& events) {
    std::string out;
    for (const auto& e : events) out += describe(e) + "; ";
    return out;
}

}  // namespace uee::test
