#pragma once

// Synthetic tick streams with injected ground-truth events, and the
// exhaustive reference detector used to check the fast one.

#include "uee/detector.hpp"
#include "uee/mechanism.hpp"
#include "uee/output.hpp"
#include "uee/stats.hpp"
#include "uee/tickstore.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace uee {

struct BackgroundParams {
    std::uint64_t seed = 1;
    std::size_t length = 10'000;      // trades
    double start_price = 100.0;
    double tick_size = 0.01;
    double volatility = 0.3;          // probability that a trade moves the price by one tick
    double trades_per_second = 4.0;   // Poisson mean of the per-second trade count
    std::int64_t start_second = 34'200;
    int spread_ticks = 1;
    int max_retries = 8;
    bool verify = true;               // redraw until no event is detected
};

struct SynthStream {
    StreamKey key;
    std::vector<TradeTick> trades;  // ordered, timestamps assigned
    std::vector<QuoteTick> quotes;  // one per background trade, same seconds
};

// Seed-deterministic random walk on the tick grid. With `verify`, the
// stream is checked (reference detector up to 20k trades, fast detector
// beyond) and redrawn until event free; throws Error(generation) when the
// retry budget runs out.
SynthStream generate_background(const StreamKey& key, const BackgroundParams& params,
                                const UeeCriterion& criterion = {});

enum class QuoteProfile { single_step, uniform_steps };

struct InjectionSpec {
    std::int64_t start_second = 0;
    Direction direction = Direction::crash;
    std::uint32_t n_trades = 11;
    double relative_change = 0.009;      // magnitude of the total move
    std::uint32_t trades_per_second = 10;
    EndTrigger end_trigger = EndTrigger::trend_reversal;  // trend_reversal or trading_pause
    std::vector<double> eta_path;        // designed eta_1..eta_P of the trades after the extremum
    std::uint32_t post_trades_per_second = 4;
    QuoteProfile quote_profile = QuoteProfile::uniform_steps;
    double quote_jump = 0.0;             // single_step magnitude; 0 uses relative_change
    std::optional<Price> base_price;     // price of the first event trade; default: preceding trade
    bool expect_detected = true;         // whether the spec is meant to satisfy the criterion
};

struct GroundTruthEvent {
    StreamKey key;
    bool expect_detected = true;
    Direction direction = Direction::crash;
    std::int64_t start_second = 0;
    std::uint32_t n_trades = 0;
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    double t0_uee = 0.0;
    double t0_rec = 0.0;
    Price price_start;
    Price price_extreme;
    double size = 0.0;
    EndTrigger end_trigger = EndTrigger::trend_reversal;
    double max_jump = 0.0;
    std::vector<double> etas;  // realised on the price grid
    std::pair<std::int64_t, std::int64_t> owned_seconds;  // inclusive range cleared by the injection
};

class InjectedStream {
public:
    explicit InjectedStream(SynthStream background) : stream_(std::move(background)) {}

    // Overwrites whole seconds of the stream with the specified pattern and
    // records its ground truth. Throws Error(overlap) if the pattern's
    // seconds intersect an earlier injection, Error(invalid_argument) for
    // unrealisable specs.
    const GroundTruthEvent& inject(const InjectionSpec& spec);

    // Seconds the pattern for `spec` would occupy, inclusive.
    static std::pair<std::int64_t, std::int64_t> footprint(const InjectionSpec& spec);

    const SynthStream& stream() const { return stream_; }
    const std::vector<GroundTruthEvent>& truth() const { return truth_; }

private:
    void reindex();

    SynthStream stream_;
    std::vector<GroundTruthEvent> truth_;
};

// Exhaustive reference: every trade pair (i, j) is tested against the
// criterion, qualifying pairs are grouped by the directional segment they
// lie in, and each segment yields one event from its earliest qualifying i
// to its last trade. Quadratic in the stream length.
std::vector<UeeEvent> oracle_detect(const StreamKey& key, std::span<const TradeTick> trades,
                                    const UeeCriterion& criterion = {});

// Adversarial stream for equivalence testing: background walk, monotone
// bursts near the criterion thresholds, flat stretches and pauses.
std::vector<TradeTick> fuzz_stream(std::uint64_t seed, std::size_t length);

struct BundleConfig {
    std::uint64_t seed = 1;
    std::size_t symbols = 4;
    std::size_t venues = 2;
    std::size_t days = 2;
    std::size_t trades_per_stream = 5'000;
    std::size_t events = 3;
    std::size_t near_misses = 0;
    std::size_t post_trades = 20;
    Date first_day{2008, 9, 15};
};

struct SynthBundle {
    std::vector<SynthStream> streams;
    std::vector<GroundTruthEvent> truth;
    SectorMap sectors;
};

SynthBundle generate_bundle(const BundleConfig& config, const UeeCriterion& criterion = {});

// trades.csv, quotes.csv, sectors.csv and ground_truth.json under `dir`,
// each carrying `meta`.
void write_bundle(const SynthBundle& bundle, const std::filesystem::path& dir, const Json& meta);

}  // namespace uee
