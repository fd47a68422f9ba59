#pragma once

// Ultrafast extreme event detection.
//
// A stream is cut into directional segments: a segment starts at the first
// trade, after a trading pause, or at the trade that reverses the previous
// segment's direction. Its direction is set by its first non-flat step and
// equal prices never end it. A segment produces an event when some window
// (i, j) inside it spans at least `min_trades` trades, lasts at most
// `max_duration` and moves by at least `min_relative_change` relative to
// trade i. The event starts at the earliest such i and ends at the
// segment's last trade, i.e. the extremum before the reversal or pause.

#include "uee/tickstore.hpp"
#include "uee/types.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace uee {

// Slack for comparisons of fractional timestamps. Durations are sums of
// k/m fractions, so exact boundary windows (1.5 s) must not flip with the
// rounding of the absolute time.
inline constexpr double kTimeEpsilon = 1e-9;

inline bool within_duration(double elapsed, double max_duration) { return elapsed <= max_duration + kTimeEpsilon; }
inline bool is_pause(double gap, double pause_threshold) { return gap >= pause_threshold - kTimeEpsilon; }

struct UeeCriterion {
    double min_relative_change = 0.008;
    double max_duration = 1.5;
    std::uint32_t min_trades = 10;
    double pause_threshold = 1.0;

    void validate() const;  // throws Error(invalid_argument)
};

enum class EndTrigger { trend_reversal, trading_pause, stream_end };

std::string_view to_string(EndTrigger trigger);
std::optional<EndTrigger> parse_end_trigger(std::string_view text);

struct UeeEvent {
    StreamKey key;
    Direction direction = Direction::crash;
    std::size_t start_index = 0;  // first trade of the qualifying run
    std::size_t end_index = 0;    // extremum trade; recovery is measured from here
    double t0_uee = 0.0;
    double t0_rec = 0.0;
    Price price_start;
    Price price_extreme;
    double size = 0.0;
    EndTrigger end_trigger = EndTrigger::stream_end;

    std::size_t n_trades() const { return end_index - start_index + 1; }

    friend bool operator==(const UeeEvent&, const UeeEvent&) = default;
};

std::vector<UeeEvent> detect_uees(const StreamKey& key, std::span<const TradeTick> trades,
                                  const UeeCriterion& criterion = {});

// (price_extreme - price_start) / price_start
double event_size(const UeeEvent& event);

// Builds an event for a segment ending at `end`; used by every detector so
// that trigger classification and field population cannot drift apart.
UeeEvent make_event(const StreamKey& key, std::span<const TradeTick> trades, Direction direction,
                    std::size_t start, std::size_t end, double pause_threshold);

struct TriggerShares {
    double trend_reversal = 0.0;
    double trading_pause = 0.0;
    double stream_end = 0.0;
    std::size_t counted = 0;
};

// Throws Error(empty_input) when no event is counted.
TriggerShares end_trigger_shares(std::span<const UeeEvent> events, bool exclude_stream_end = false);

}  // namespace uee
