#include "uee/synth.hpp"

#include "uee/output.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace uee {
namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

std::int64_t to_units(double price) { return Price::from_double(price).units; }

void renumber(std::vector<TradeTick>& trades) {
    for (std::size_t i = 0; i < trades.size(); ++i) trades[i].seq = i;
}

void renumber(std::vector<QuoteTick>& quotes) {
    for (std::size_t i = 0; i < quotes.size(); ++i) quotes[i].seq = i;
}

QuoteTick make_quote(std::int64_t second, Price bid, Price ask) {
    QuoteTick q;
    q.second = second;
    q.t = static_cast<double>(second);
    q.bid = bid;
    q.ask = ask;
    q.crossed = bid >= ask;
    return q;
}

TradeTick make_trade(std::int64_t second, Price price, std::int64_t size) {
    TradeTick t;
    t.second = second;
    t.t = static_cast<double>(second);
    t.price = price;
    t.size = size;
    return t;
}

}  // namespace

SynthStream generate_background(const StreamKey& key, const BackgroundParams& p, const UeeCriterion& criterion) {
    if (!(p.start_price > 0.0) || !(p.tick_size > 0.0) || !(p.trades_per_second > 0.0) || p.volatility < 0.0 ||
        p.volatility > 1.0 || p.spread_ticks < 1)
        throw Error(ErrorCode::invalid_argument, "background parameters must be positive");
    const std::int64_t tick = to_units(p.tick_size);
    const std::int64_t spread = tick * p.spread_ticks;

    for (int attempt = 0; attempt <= p.max_retries; ++attempt) {
        auto rng = make_rng(p.seed, static_cast<std::uint64_t>(attempt));
        std::poisson_distribution<int> per_second(p.trades_per_second);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<int> lots(1, 10);

        SynthStream s;
        s.key = key;
        s.trades.reserve(p.length);
        s.quotes.reserve(p.length);
        std::int64_t price = to_units(p.start_price);
        std::int64_t second = p.start_second;
        while (s.trades.size() < p.length) {
            if (second >= 86'400) throw Error(ErrorCode::generation, "background does not fit into one day");
            const int count = per_second(rng);
            for (int k = 0; k < count && s.trades.size() < p.length; ++k) {
                const double u = unit(rng);
                if (u < p.volatility / 2) price -= tick;
                else if (u < p.volatility) price += tick;
                price = std::max(price, tick);
                s.trades.push_back(make_trade(second, Price{price}, 100 * lots(rng)));
                s.quotes.push_back(make_quote(second, Price{std::max<std::int64_t>(price - spread, 1)},
                                              Price{price + spread}));
            }
            ++second;
        }
        renumber(s.trades);
        renumber(s.quotes);
        assign_subsecond_timestamps(std::span<TradeTick>(s.trades));
        assign_subsecond_timestamps(std::span<QuoteTick>(s.quotes));

        if (!p.verify) return s;
        const bool clean = s.trades.size() <= 20'000 ? oracle_detect(key, s.trades, criterion).empty()
                                                      : detect_uees(key, s.trades, criterion).empty();
        if (clean) return s;
    }
    throw Error(ErrorCode::generation, "could not draw an event-free background for " + key.to_string());
}

std::pair<std::int64_t, std::int64_t> InjectedStream::footprint(const InjectionSpec& spec) {
    const std::int64_t r = spec.trades_per_second;
    const std::int64_t n = spec.n_trades;
    const std::int64_t event_seconds = (n + r - 1) / r;
    const std::int64_t last_event_second = spec.start_second + event_seconds - 1;
    const std::int64_t c = n - (event_seconds - 1) * r;
    std::int64_t post = static_cast<std::int64_t>(spec.eta_path.size());
    if (spec.end_trigger == EndTrigger::trend_reversal && post == 0) post = 1;
    std::int64_t next = last_event_second + 1;
    if (spec.end_trigger == EndTrigger::trend_reversal) post -= std::min<std::int64_t>(post, r - c);
    else next += 1;  // one empty second forces the pause
    const std::int64_t pr = spec.post_trades_per_second;
    const std::int64_t post_seconds = (post + pr - 1) / pr;
    const std::int64_t last = post_seconds > 0 ? next + post_seconds - 1 : next - 1;
    return {spec.start_second - 1, std::max(last, last_event_second) + 1};
}

const GroundTruthEvent& InjectedStream::inject(const InjectionSpec& spec) {
    if (spec.n_trades < 2 || spec.trades_per_second < 2 || spec.post_trades_per_second < 1)
        throw Error(ErrorCode::invalid_argument, "injection needs >= 2 trades at >= 2 trades per second");
    if (!(spec.relative_change > 0.0) || spec.relative_change >= 1.0)
        throw Error(ErrorCode::invalid_argument, "injection relative change must be in (0, 1)");
    if (spec.end_trigger == EndTrigger::stream_end)
        throw Error(ErrorCode::invalid_argument, "injection end trigger must be a reversal or a pause");

    const auto owned = footprint(spec);
    for (const auto& t : truth_) {
        if (owned.first <= t.owned_seconds.second && t.owned_seconds.first <= owned.second)
            throw Error(ErrorCode::overlap, "injection at second " + std::to_string(spec.start_second) +
                                                " overlaps an earlier injection");
    }

    // Start price: explicit, else the last trade before the cleared range.
    Price p0;
    if (spec.base_price) {
        p0 = *spec.base_price;
    } else {
        auto it = std::find_if(stream_.trades.rbegin(), stream_.trades.rend(),
                               [&](const TradeTick& t) { return t.second < owned.first; });
        if (it == stream_.trades.rend()) it = stream_.trades.rbegin();
        p0 = it == stream_.trades.rend() ? Price::from_double(100.0) : it->price;
    }

    const bool crash = spec.direction == Direction::crash;
    const std::int64_t sign = crash ? -1 : 1;
    const std::int64_t total = std::llround(spec.relative_change * static_cast<double>(p0.units));
    const std::int64_t n = spec.n_trades;
    std::vector<Price> event_prices;
    for (std::int64_t k = 0; k < n; ++k) event_prices.push_back(Price{p0.units + sign * (k * total / (n - 1))});
    const Price extreme = event_prices.back();
    if (extreme.units <= 0) throw Error(ErrorCode::invalid_argument, "injection drives the price to zero");

    std::vector<double> path = spec.eta_path;
    if (path.empty() && spec.end_trigger == EndTrigger::trend_reversal) path.push_back(0.5);
    const std::int64_t deviation = extreme.units - p0.units;
    std::vector<Price> post_prices;
    std::vector<double> realised;
    for (double eta : path) {
        const std::int64_t offset = std::llround(eta * static_cast<double>(deviation));
        const Price price{extreme.units - offset};
        if (price.units <= 0) throw Error(ErrorCode::invalid_argument, "eta path drives the price to zero");
        post_prices.push_back(price);
        realised.push_back(static_cast<double>(offset) / static_cast<double>(deviation));
    }
    if (spec.end_trigger == EndTrigger::trend_reversal && !(realised.front() > 0.0))
        throw Error(ErrorCode::invalid_argument, "a reversal-ended injection needs eta_1 > 0");

    // Relevant quote side (bid for crashes, ask for spikes) follows the profile.
    std::vector<Price> side(static_cast<std::size_t>(n));
    const double jump_size = spec.quote_jump > 0.0 ? spec.quote_jump : spec.relative_change;
    if (spec.quote_profile == QuoteProfile::single_step) {
        const std::int64_t jump = std::llround(jump_size * static_cast<double>(p0.units));
        for (std::int64_t k = 0; k < n; ++k) side[k] = Price{k < n / 2 ? p0.units : p0.units + sign * jump};
    } else {
        for (std::int64_t k = 0; k < n; ++k) side[k] = event_prices[static_cast<std::size_t>(k)];
    }
    double max_jump = 0.0;
    for (std::size_t k = 0; k + 1 < side.size(); ++k) {
        const double step = relative_change(side[k], side[k + 1]);
        max_jump = crash ? std::min(max_jump, step) : std::max(max_jump, step);
    }
    const std::int64_t spread = to_units(0.01);
    auto quote_for = [&](std::int64_t second, Price relevant) {
        return crash ? make_quote(second, relevant, Price{relevant.units + spread})
                     : make_quote(second, Price{std::max<std::int64_t>(relevant.units - spread, 1)}, relevant);
    };

    // Lay the pattern out on whole seconds.
    std::vector<TradeTick> trades;
    std::vector<QuoteTick> quotes;
    const std::int64_t r = spec.trades_per_second;
    std::int64_t second = spec.start_second;
    std::int64_t slot = 0;
    for (std::int64_t k = 0; k < n; ++k) {
        if (slot == r) {
            ++second;
            slot = 0;
        }
        trades.push_back(make_trade(second, event_prices[static_cast<std::size_t>(k)], 100));
        quotes.push_back(quote_for(second, side[static_cast<std::size_t>(k)]));
        ++slot;
    }
    std::size_t next_post = 0;
    if (spec.end_trigger == EndTrigger::trend_reversal) {
        // Fill the rest of the last event second so the next trade follows
        // closely enough not to count as a pause.
        for (; slot < r && next_post < post_prices.size(); ++slot, ++next_post) {
            trades.push_back(make_trade(second, post_prices[next_post], 100));
            quotes.push_back(quote_for(second, post_prices[next_post]));
        }
        ++second;
    } else {
        second += 2;
    }
    const std::int64_t pr = spec.post_trades_per_second;
    for (slot = 0; next_post < post_prices.size(); ++next_post) {
        if (slot == pr) {
            ++second;
            slot = 0;
        }
        trades.push_back(make_trade(second, post_prices[next_post], 100));
        quotes.push_back(quote_for(second, post_prices[next_post]));
        ++slot;
    }

    auto outside = [&](const auto& tick) { return tick.second < owned.first || tick.second > owned.second; };
    std::vector<TradeTick> merged_trades;
    std::copy_if(stream_.trades.begin(), stream_.trades.end(), std::back_inserter(merged_trades), outside);
    merged_trades.insert(merged_trades.end(), trades.begin(), trades.end());
    std::stable_sort(merged_trades.begin(), merged_trades.end(),
                     [](const TradeTick& a, const TradeTick& b) { return a.second < b.second; });
    std::vector<QuoteTick> merged_quotes;
    std::copy_if(stream_.quotes.begin(), stream_.quotes.end(), std::back_inserter(merged_quotes), outside);
    merged_quotes.insert(merged_quotes.end(), quotes.begin(), quotes.end());
    std::stable_sort(merged_quotes.begin(), merged_quotes.end(),
                     [](const QuoteTick& a, const QuoteTick& b) { return a.second < b.second; });
    renumber(merged_trades);
    renumber(merged_quotes);
    assign_subsecond_timestamps(std::span<TradeTick>(merged_trades));
    assign_subsecond_timestamps(std::span<QuoteTick>(merged_quotes));
    stream_.trades = std::move(merged_trades);
    stream_.quotes = std::move(merged_quotes);

    GroundTruthEvent g;
    g.key = stream_.key;
    g.expect_detected = spec.expect_detected;
    g.direction = spec.direction;
    g.start_second = spec.start_second;
    g.n_trades = spec.n_trades;
    g.price_start = p0;
    g.price_extreme = extreme;
    g.size = relative_change(p0, extreme);
    g.end_trigger = spec.end_trigger;
    g.max_jump = max_jump;
    g.etas = std::move(realised);
    g.owned_seconds = owned;
    truth_.push_back(std::move(g));
    reindex();
    return truth_.back();
}

void InjectedStream::reindex() {
    for (auto& g : truth_) {
        const auto it = std::lower_bound(stream_.trades.begin(), stream_.trades.end(), g.start_second,
                                         [](const TradeTick& t, std::int64_t s) { return t.second < s; });
        g.start_index = static_cast<std::size_t>(it - stream_.trades.begin());
        g.end_index = g.start_index + g.n_trades - 1;
        g.t0_uee = stream_.trades[g.start_index].t;
        g.t0_rec = stream_.trades[g.end_index].t;
    }
}

std::vector<UeeEvent> oracle_detect(const StreamKey& key, std::span<const TradeTick> trades,
                                    const UeeCriterion& criterion) {
    criterion.validate();
    const std::size_t n = trades.size();
    if (n == 0) return {};

    auto paused = [&](std::size_t k) { return is_pause(trades[k + 1].t - trades[k].t, criterion.pause_threshold); };
    auto sign = [&](std::size_t k) {
        return (trades[k + 1].price > trades[k].price) - (trades[k + 1].price < trades[k].price);
    };

    // Steps k -> k+1 that break a weakly falling / rising run, as prefix counts.
    std::vector<std::uint32_t> rise_or_pause(n, 0), fall_or_pause(n, 0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const bool p = paused(k);
        rise_or_pause[k + 1] = rise_or_pause[k] + (p || sign(k) > 0);
        fall_or_pause[k + 1] = fall_or_pause[k] + (p || sign(k) < 0);
    }

    // Segment labels: a new segment begins after a pause or at the trade
    // that moves against the direction the current segment has taken.
    std::vector<std::uint32_t> segment(n, 0);
    std::vector<int> segment_dir{0};
    std::vector<std::size_t> segment_last{0};
    for (std::size_t k = 1; k < n; ++k) {
        const int s = sign(k - 1);
        int& dir = segment_dir.back();
        const bool split = paused(k - 1) || (s != 0 && dir != 0 && s != dir);
        if (split) {
            segment_dir.push_back(0);
            segment_last.push_back(k);
        } else {
            if (dir == 0) dir = s;
            segment_last.back() = k;
        }
        segment[k] = static_cast<std::uint32_t>(segment_dir.size() - 1);
    }

    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> first_start(segment_dir.size(), none);
    const std::size_t span = criterion.min_trades - 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + span; j < n; ++j) {
            if (segment[j] != segment[i]) continue;
            if (!within_duration(trades[j].t - trades[i].t, criterion.max_duration)) continue;
            const double move = relative_change(trades[i].price, trades[j].price);
            const bool crash = rise_or_pause[j] == rise_or_pause[i] && -move >= criterion.min_relative_change;
            const bool spike = fall_or_pause[j] == fall_or_pause[i] && move >= criterion.min_relative_change;
            if (crash || spike) first_start[segment[i]] = std::min(first_start[segment[i]], i);
        }
    }

    std::vector<UeeEvent> events;
    for (std::size_t s = 0; s < segment_dir.size(); ++s) {
        if (first_start[s] == none) continue;
        const std::size_t start = first_start[s];
        const std::size_t end = segment_last[s];
        UeeEvent e;
        e.key = key;
        e.direction = trades[end].price < trades[start].price ? Direction::crash : Direction::spike;
        e.start_index = start;
        e.end_index = end;
        e.t0_uee = trades[start].t;
        e.t0_rec = trades[end].t;
        e.price_start = trades[start].price;
        e.price_extreme = trades[end].price;
        e.size = relative_change(e.price_start, e.price_extreme);
        if (end == n - 1) e.end_trigger = EndTrigger::stream_end;
        else if (paused(end)) e.end_trigger = EndTrigger::trading_pause;
        else e.end_trigger = EndTrigger::trend_reversal;
        events.push_back(std::move(e));
    }
    return events;
}

std::vector<TradeTick> fuzz_stream(std::uint64_t seed, std::size_t length) {
    auto rng = make_rng(seed, 0x5eed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::poisson_distribution<int> calm(3.0);
    const std::int64_t tick = to_units(0.01);

    std::vector<TradeTick> trades;
    trades.reserve(length);
    std::int64_t price = to_units(20.0 + 180.0 * unit(rng));
    price -= price % tick;
    std::int64_t second = 34'200;
    int burst_left = 0, flat_left = 0, burst_dir = 0;
    std::int64_t burst_step = 0;

    auto next_price = [&] {
        if (burst_left > 0) {
            --burst_left;
            if (unit(rng) >= 0.15) {
                const auto hi = std::max<std::int64_t>(1, 2 * burst_step);
                price += burst_dir * std::uniform_int_distribution<std::int64_t>(0, hi)(rng) * tick;
            }
        } else if (flat_left > 0) {
            --flat_left;
        } else {
            const double u = unit(rng);
            if (u < 0.05) {
                burst_dir = unit(rng) < 0.5 ? -1 : 1;
                burst_left = std::uniform_int_distribution<int>(5, 22)(rng);
                // Total move around the default threshold, 0.4% .. 1.4%.
                const double target = (0.004 + 0.010 * unit(rng)) * static_cast<double>(price);
                burst_step = std::max<std::int64_t>(
                    1, static_cast<std::int64_t>(target / static_cast<double>(tick) / burst_left));
            } else if (u < 0.12) {
                flat_left = std::uniform_int_distribution<int>(3, 15)(rng);
            } else {
                const double v = unit(rng);
                if (v < 0.35) price -= tick * std::uniform_int_distribution<int>(1, 3)(rng);
                else if (v < 0.70) price += tick * std::uniform_int_distribution<int>(1, 3)(rng);
            }
        }
        price = std::max(price, 100 * tick);
        return Price{price};
    };

    while (trades.size() < length && second < 86'400) {
        const double u = unit(rng);
        int count = 0;
        if (u < 0.06) count = 0;                                                 // pause
        else if (u < 0.40) count = std::uniform_int_distribution<int>(5, 16)(rng);  // busy second
        else count = calm(rng);
        for (int k = 0; k < count && trades.size() < length; ++k) trades.push_back(make_trade(second, next_price(), 100));
        ++second;
    }
    renumber(trades);
    assign_subsecond_timestamps(std::span<TradeTick>(trades));
    return trades;
}

namespace {

const char* const kSectors[] = {"Energy", "Financials", "Information Technology", "Utilities", "Materials"};
const char* const kVenues[] = {"N", "P", "Q", "Z", "B", "T"};

std::string symbol_name(std::size_t k) {
    std::string s = "S";
    do {
        s += static_cast<char>('A' + k % 26);
        k /= 26;
    } while (k > 0);
    return s;
}

std::vector<double> default_eta_path(std::mt19937_64& rng, std::size_t length) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> path;
    double eta = 0.1 + 0.9 * unit(rng);
    for (std::size_t k = 0; k < length; ++k) {
        path.push_back(eta);
        eta += 0.2 * (unit(rng) - 0.5);
    }
    return path;
}

Date add_weekdays(Date d, std::size_t k) {
    auto days = d.days_since_epoch();
    while (k > 0) {
        ++days;
        const auto wd = ((days % 7) + 7 + 3) % 7;  // 1970-01-01 was a Thursday; Mon=0
        if (wd < 5) --k;
    }
    return Date::from_days(days);
}

}  // namespace

SynthBundle generate_bundle(const BundleConfig& config, const UeeCriterion& criterion) {
    if (config.symbols == 0 || config.venues == 0 || config.days == 0 || config.venues > std::size(kVenues))
        throw Error(ErrorCode::invalid_argument, "bundle needs >= 1 symbol, 1-6 venues and >= 1 day");
    auto rng = make_rng(config.seed, 0xb0d1e);

    SynthBundle bundle;
    std::vector<InjectedStream> streams;
    std::uint64_t stream_no = 0;
    for (std::size_t s = 0; s < config.symbols; ++s) {
        const std::string symbol = symbol_name(s);
        bundle.sectors[symbol] = kSectors[s % std::size(kSectors)];
        for (std::size_t d = 0; d < config.days; ++d) {
            for (std::size_t v = 0; v < config.venues; ++v) {
                BackgroundParams p;
                p.seed = config.seed * 1'000'003 + stream_no++;
                p.length = config.trades_per_stream;
                p.start_price = 20.0 + 10.0 * static_cast<double>(s % 9);
                StreamKey key{symbol, kVenues[v], add_weekdays(config.first_day, d)};
                streams.emplace_back(generate_background(key, p, criterion));
            }
        }
    }

    auto place = [&](const InjectionSpec& base) {
        std::uniform_int_distribution<std::size_t> pick(0, streams.size() - 1);
        for (int attempt = 0; attempt < 200; ++attempt) {
            auto& target = streams[pick(rng)];
            const auto& trades = target.stream().trades;
            if (trades.empty()) continue;
            InjectionSpec spec = base;
            const auto width = InjectedStream::footprint(spec).second - spec.start_second;
            const std::int64_t lo = trades.front().second + 2;
            const std::int64_t hi = trades.back().second - width - 2;
            if (hi <= lo) continue;
            spec.start_second = std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
            try {
                target.inject(spec);
                return;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::overlap) throw;
            }
        }
        throw Error(ErrorCode::generation, "no free room left for another injection");
    };

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t e = 0; e < config.events; ++e) {
        InjectionSpec spec;
        spec.start_second = 0;
        spec.direction = unit(rng) < 0.5 ? Direction::crash : Direction::spike;
        spec.n_trades = std::uniform_int_distribution<std::uint32_t>(criterion.min_trades, criterion.min_trades + 5)(rng);
        spec.trades_per_second = std::max<std::uint32_t>(spec.n_trades, 10);
        spec.relative_change = criterion.min_relative_change * (1.1 + 2.0 * unit(rng));
        spec.end_trigger = unit(rng) < 0.75 ? EndTrigger::trend_reversal : EndTrigger::trading_pause;
        spec.eta_path = default_eta_path(rng, config.post_trades);
        spec.quote_profile = unit(rng) < 0.5 ? QuoteProfile::single_step : QuoteProfile::uniform_steps;
        spec.quote_jump = 0.002 + 0.010 * unit(rng);
        place(spec);
    }
    // Near misses fail exactly one condition: one trade short, a move just
    // under the threshold, or a span just over the duration limit.
    for (std::size_t e = 0; e < config.near_misses; ++e) {
        InjectionSpec spec;
        spec.direction = unit(rng) < 0.5 ? Direction::crash : Direction::spike;
        spec.eta_path = default_eta_path(rng, config.post_trades);
        spec.expect_detected = false;
        switch (e % 3) {
        case 0:
            spec.n_trades = criterion.min_trades - 1;
            spec.relative_change = criterion.min_relative_change * 1.25;
            break;
        case 1:
            spec.n_trades = criterion.min_trades;
            spec.relative_change = criterion.min_relative_change * 0.9875;
            break;
        default: {
            // n - 1 steps at r per second span (n - 1) / r seconds; any window
            // inside the duration limit covers at most `inner` of the steps.
            spec.trades_per_second = 10;
            const auto steps = static_cast<std::uint32_t>(std::ceil(criterion.max_duration * 10 + 1e-9)) + 1;
            spec.n_trades = std::max(steps + 1, criterion.min_trades);
            const double inner = static_cast<double>(spec.n_trades - 2) / static_cast<double>(spec.n_trades - 1);
            spec.relative_change = criterion.min_relative_change / inner * 0.995;
            break;
        }
        }
        place(spec);
    }

    for (auto& s : streams) {
        bundle.truth.insert(bundle.truth.end(), s.truth().begin(), s.truth().end());
        bundle.streams.push_back(s.stream());
    }
    std::sort(bundle.streams.begin(), bundle.streams.end(),
              [](const SynthStream& a, const SynthStream& b) { return a.key < b.key; });
    std::sort(bundle.truth.begin(), bundle.truth.end(), [](const GroundTruthEvent& a, const GroundTruthEvent& b) {
        return std::tie(a.key, a.start_index) < std::tie(b.key, b.start_index);
    });
    return bundle;
}

void write_bundle(const SynthBundle& bundle, const std::filesystem::path& dir, const Json& meta) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create '" + dir.string() + "': " + ec.message());

    const std::string block = csv_meta_block(meta);
    std::string trades = block + "symbol,venue,date,time,price,size\n";
    std::string quotes = block + "symbol,venue,date,time,bid,ask\n";
    for (const auto& s : bundle.streams) {
        const std::string prefix = s.key.symbol + "," + s.key.venue + "," + s.key.day.to_string() + ",";
        for (const auto& t : s.trades)
            trades += prefix + std::to_string(t.second) + "," + format_price(t.price) + "," + std::to_string(t.size) + "\n";
        for (const auto& q : s.quotes)
            quotes += prefix + std::to_string(q.second) + "," + format_price(q.bid) + "," + format_price(q.ask) + "\n";
    }
    std::string sectors = block + "ticker,sector\n";
    for (const auto& [ticker, sector] : bundle.sectors) sectors += ticker + "," + sector + "\n";

    Json truth;
    truth["meta"] = meta;
    truth["events"] = Json::array();
    for (const auto& g : bundle.truth) {
        Json j;
        j["symbol"] = g.key.symbol;
        j["venue"] = g.key.venue;
        j["day"] = g.key.day.to_string();
        j["expect_detected"] = g.expect_detected;
        j["direction"] = std::string(to_string(g.direction));
        j["start_index"] = g.start_index;
        j["end_index"] = g.end_index;
        j["t0_uee"] = round9(g.t0_uee);
        j["t0_rec"] = round9(g.t0_rec);
        j["price_start"] = format_price(g.price_start);
        j["price_extreme"] = format_price(g.price_extreme);
        j["size"] = round9(g.size);
        j["end_trigger"] = std::string(to_string(g.end_trigger));
        j["max_jump"] = round9(g.max_jump);
        Json etas = Json::array();
        for (double eta : g.etas) etas.push_back(round9(eta));
        j["etas"] = std::move(etas);
        truth["events"].push_back(std::move(j));
    }

    write_text_file(dir / "trades.csv", trades);
    write_text_file(dir / "quotes.csv", quotes);
    write_text_file(dir / "sectors.csv", sectors);
    write_text_file(dir / "ground_truth.json", truth.dump(2) + "\n");
}

}  // namespace uee
