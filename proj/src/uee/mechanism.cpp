#include "uee/mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace uee {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::single_order_dominant: return "single_order_dominant";
        case Regime::single_order_major: return "single_order_major";
        case Regime::incremental: return "incremental";
    }
    return "incremental";
}

void JumpThresholds::validate() const {
    if (!(major > 0.0) || !(dominant > 0.0) || major > dominant)
        throw Error(ErrorCode::invalid_argument, "jump thresholds must satisfy 0 < major <= dominant");
}

double max_quote_jump(std::span<const QuoteTick> quotes, const UeeEvent& event) {
    const auto after_start = std::upper_bound(quotes.begin(), quotes.end(), event.t0_uee + kTimeEpsilon,
                                              [](double t, const QuoteTick& q) { return t < q.t; });
    const auto first = after_start == quotes.begin() ? after_start : std::prev(after_start);
    const auto last = std::upper_bound(quotes.begin(), quotes.end(), event.t0_rec + kTimeEpsilon,
                                       [](double t, const QuoteTick& q) { return t < q.t; });
    if (last - first < 2)
        throw Error(ErrorCode::insufficient_quotes, "fewer than two quotes during event " + event.key.to_string());

    const bool crash = event.direction == Direction::crash;
    double extreme = 0.0;
    for (auto it = first; it + 1 != last; ++it) {
        const Price from = crash ? it->bid : it->ask;
        const Price to = crash ? (it + 1)->bid : (it + 1)->ask;
        const double step = relative_change(from, to);
        extreme = crash ? std::min(extreme, step) : std::max(extreme, step);
    }
    return extreme;
}

Regime classify_regime(double max_jump, const JumpThresholds& thresholds) {
    const double magnitude = std::fabs(max_jump);
    if (magnitude >= thresholds.dominant) return Regime::single_order_dominant;
    if (magnitude >= thresholds.major) return Regime::single_order_major;
    return Regime::incremental;
}

TriggerClassification classify_trigger(std::size_t event_id, Direction direction, double max_jump,
                                       const JumpThresholds& thresholds) {
    return TriggerClassification{event_id, direction, max_jump, classify_regime(max_jump, thresholds)};
}

std::int64_t bin_index(double value, double width) {
    return static_cast<std::int64_t>(std::floor(value / width + 1e-9));
}

namespace {

void tally(RegimeShares& shares, Regime r) {
    ++shares.count;
    switch (r) {
        case Regime::single_order_dominant: shares.dominant += 1.0; break;
        case Regime::single_order_major: shares.major += 1.0; break;
        case Regime::incremental: shares.incremental += 1.0; break;
    }
}

void normalise(RegimeShares& shares) {
    if (shares.count == 0) return;
    const auto d = static_cast<double>(shares.count);
    shares.dominant /= d;
    shares.major /= d;
    shares.incremental /= d;
}

}  // namespace

MechanismHistogram mechanism_histogram(std::span<const TriggerClassification> classifications, double bin_width,
                                       const JumpThresholds& thresholds) {
    if (!(bin_width > 0.0)) throw Error(ErrorCode::invalid_argument, "bin width must be > 0");
    MechanismHistogram h;
    h.bin_width = bin_width;
    for (const auto& c : classifications) {
        const auto k = bin_index(std::fabs(c.max_jump), bin_width);
        const Regime r = classify_regime(c.max_jump, thresholds);
        if (c.direction == Direction::crash) {
            ++h.crash[k];
            tally(h.crash_shares, r);
        } else {
            ++h.spike[k];
            tally(h.spike_shares, r);
        }
        tally(h.all_shares, r);
    }
    normalise(h.crash_shares);
    normalise(h.spike_shares);
    normalise(h.all_shares);
    return h;
}

}  // namespace uee
