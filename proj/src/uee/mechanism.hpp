#pragma once

// Trigger mechanism: the largest single-step jump of the best bid (crashes)
// or best ask (spikes) while an event unfolds, and the regime it implies.

#include "uee/detector.hpp"
#include "uee/tickstore.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace uee {

enum class Regime { single_order_dominant, single_order_major, incremental };

std::string_view to_string(Regime regime);

struct JumpThresholds {
    double major = 0.005;
    double dominant = 0.008;

    void validate() const;
};

struct TriggerClassification {
    std::size_t event_id = 0;
    Direction direction = Direction::crash;
    double max_jump = 0.0;  // signed, never against the event direction
    Regime regime = Regime::incremental;
};

// Uses the quote standing at t0_uee (last update at or before it) and every
// update up to t0_rec. Throws Error(insufficient_quotes) when fewer than two
// quotes fall in that window. `quotes` must be time ordered.
double max_quote_jump(std::span<const QuoteTick> quotes, const UeeEvent& event);

Regime classify_regime(double max_jump, const JumpThresholds& thresholds = {});

TriggerClassification classify_trigger(std::size_t event_id, Direction direction, double max_jump,
                                       const JumpThresholds& thresholds = {});

struct RegimeShares {
    double dominant = 0.0;
    double major = 0.0;
    double incremental = 0.0;
    std::size_t count = 0;
};

// Histogram of |max_jump| in bins [k*w, (k+1)*w), keyed by k.
struct MechanismHistogram {
    double bin_width = 0.001;
    std::map<std::int64_t, std::uint64_t> crash;
    std::map<std::int64_t, std::uint64_t> spike;
    RegimeShares crash_shares;
    RegimeShares spike_shares;
    RegimeShares all_shares;
};

MechanismHistogram mechanism_histogram(std::span<const TriggerClassification> classifications, double bin_width,
                                       const JumpThresholds& thresholds = {});

// floor(value / width), with values within 1e-9 bin widths below an edge
// assigned to the upper bin so that 0.009 / 0.001 lands in bin 9.
std::int64_t bin_index(double value, double width);

}  // namespace uee
