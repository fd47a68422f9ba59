#include "uee/detector.hpp"

#include <cmath>

namespace uee {

void UeeCriterion::validate() const {
    if (!(min_relative_change > 0.0) || !std::isfinite(min_relative_change))
        throw Error(ErrorCode::invalid_argument, "criterion: min_relative_change must be > 0");
    if (!(max_duration > 0.0) || !std::isfinite(max_duration))
        throw Error(ErrorCode::invalid_argument, "criterion: max_duration must be > 0");
    if (min_trades < 2) throw Error(ErrorCode::invalid_argument, "criterion: min_trades must be >= 2");
    if (!(pause_threshold > 0.0) || !std::isfinite(pause_threshold))
        throw Error(ErrorCode::invalid_argument, "criterion: pause_threshold must be > 0");
}

std::string_view to_string(EndTrigger trigger) {
    switch (trigger) {
        case EndTrigger::trend_reversal: return "trend_reversal";
        case EndTrigger::trading_pause: return "trading_pause";
        case EndTrigger::stream_end: return "stream_end";
    }
    return "stream_end";
}

std::optional<EndTrigger> parse_end_trigger(std::string_view text) {
    if (text == "trend_reversal") return EndTrigger::trend_reversal;
    if (text == "trading_pause") return EndTrigger::trading_pause;
    if (text == "stream_end") return EndTrigger::stream_end;
    return std::nullopt;
}

double event_size(const UeeEvent& event) { return relative_change(event.price_start, event.price_extreme); }

UeeEvent make_event(const StreamKey& key, std::span<const TradeTick> trades, Direction direction, std::size_t start,
                    std::size_t end, double pause_threshold) {
    UeeEvent ev;
    ev.key = key;
    ev.direction = direction;
    ev.start_index = start;
    ev.end_index = end;
    ev.t0_uee = trades[start].t;
    ev.t0_rec = trades[end].t;
    ev.price_start = trades[start].price;
    ev.price_extreme = trades[end].price;
    ev.size = relative_change(ev.price_start, ev.price_extreme);
    // A pause wins over a simultaneous reversal: the run is cut by the gap.
    if (end + 1 >= trades.size()) ev.end_trigger = EndTrigger::stream_end;
    else if (is_pause(trades[end + 1].t - trades[end].t, pause_threshold)) ev.end_trigger = EndTrigger::trading_pause;
    else ev.end_trigger = EndTrigger::trend_reversal;
    return ev;
}

namespace {

int step_sign(Price from, Price to) { return (to > from) - (to < from); }

}  // namespace

std::vector<UeeEvent> detect_uees(const StreamKey& key, std::span<const TradeTick> trades,
                                  const UeeCriterion& criterion) {
    criterion.validate();
    std::vector<UeeEvent> events;
    const std::size_t n = trades.size();
    const std::size_t min_trades = criterion.min_trades;

    std::size_t a = 0;
    while (a < n) {
        // Extend the segment [a, b].
        int dir = 0;
        std::size_t b = a;
        while (b + 1 < n) {
            if (is_pause(trades[b + 1].t - trades[b].t, criterion.pause_threshold)) break;
            const int s = step_sign(trades[b].price, trades[b + 1].price);
            if (s != 0) {
                if (dir == 0) dir = s;
                else if (s != dir) break;
            }
            ++b;
        }

        if (dir != 0 && b - a + 1 >= min_trades) {
            // For a monotone segment the largest move from i within the
            // duration window is reached at the farthest admissible j, so a
            // forward-only pointer finds the earliest qualifying start.
            std::size_t j = a;
            for (std::size_t i = a; i + min_trades - 1 <= b; ++i) {
                if (j < i) j = i;
                while (j < b && within_duration(trades[j + 1].t - trades[i].t, criterion.max_duration)) ++j;
                if (j - i + 1 < min_trades) continue;
                const double move = relative_change(trades[i].price, trades[j].price);
                const bool qualifies = dir < 0 ? -move >= criterion.min_relative_change
                                               : move >= criterion.min_relative_change;
                if (qualifies) {
                    events.push_back(make_event(key, trades, dir < 0 ? Direction::crash : Direction::spike, i, b,
                                                criterion.pause_threshold));
                    break;
                }
            }
        }
        a = b + 1;
    }
    return events;
}

TriggerShares end_trigger_shares(std::span<const UeeEvent> events, bool exclude_stream_end) {
    std::size_t reversal = 0, pause = 0, end = 0;
    for (const auto& e : events) {
        switch (e.end_trigger) {
            case EndTrigger::trend_reversal: ++reversal; break;
            case EndTrigger::trading_pause: ++pause; break;
            case EndTrigger::stream_end: ++end; break;
        }
    }
    if (exclude_stream_end) end = 0;
    const std::size_t total = reversal + pause + end;
    if (total == 0) throw Error(ErrorCode::empty_input, "end_trigger_shares: no events");
    const auto d = static_cast<double>(total);
    return TriggerShares{static_cast<double>(reversal) / d, static_cast<double>(pause) / d,
                         static_cast<double>(end) / d, total};
}

}  // namespace uee
