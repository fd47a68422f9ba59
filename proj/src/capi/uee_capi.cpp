#include "uee/uee.h"

#include "uee/detector.hpp"
#include "uee/pipeline.hpp"
#include "uee/recovery.hpp"
#include "uee/synth.hpp"

#include <charconv>
#include <cstring>
#include <functional>
#include <map>
#include <new>
#include <string>

struct uee_config {
    uee::RunConfig run;
    mutable std::string described;
};

struct uee_trades {
    uee::StreamKey key{"STREAM", "X", uee::Date{2000, 1, 3}};
    std::vector<uee::TradeTick> ticks;
    bool prepared = false;
};

struct uee_events {
    std::vector<uee::UeeEvent> events;
};

namespace {

thread_local std::string last_error;

uee_status status_of(uee::ErrorCode code) {
    switch (code) {
        case uee::ErrorCode::invalid_argument: return UEE_INVALID_ARGUMENT;
        case uee::ErrorCode::io: return UEE_IO;
        case uee::ErrorCode::parse: return UEE_PARSE;
        case uee::ErrorCode::invariant: return UEE_INVARIANT;
        case uee::ErrorCode::empty_input: return UEE_EMPTY_INPUT;
        case uee::ErrorCode::insufficient_quotes: return UEE_INSUFFICIENT_QUOTES;
        case uee::ErrorCode::generation: return UEE_GENERATION;
        case uee::ErrorCode::overlap: return UEE_OVERLAP;
    }
    return UEE_INTERNAL;
}

uee_status fail(uee_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class Fn>
uee_status guarded(Fn&& fn) {
    last_error.clear();
    try {
        return fn();
    } catch (const uee::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(UEE_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(UEE_INTERNAL, e.what());
    }
}

double to_double(std::string_view key, const char* value) {
    char* end = nullptr;
    const double v = std::strtod(value, &end);
    if (end == value || *end != '\0')
        throw uee::Error(uee::ErrorCode::invalid_argument, std::string(key) + ": not a number: " + value);
    return v;
}

std::uint64_t to_unsigned(std::string_view key, const char* value) {
    std::uint64_t v = 0;
    const auto* last = value + std::strlen(value);
    const auto [ptr, ec] = std::from_chars(value, last, v);
    if (ec != std::errc() || ptr != last || ptr == value)
        throw uee::Error(uee::ErrorCode::invalid_argument, std::string(key) + ": not a non-negative integer: " + value);
    return v;
}

using Setter = std::function<void(uee::RunConfig&, std::string_view, const char*)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    using uee::RunConfig;
    static const std::map<std::string, Setter, std::less<>> table = {
        {"trades", [](RunConfig& c, auto, const char* v) { c.trades = v; }},
        {"quotes", [](RunConfig& c, auto, const char* v) { c.quotes = v; }},
        {"sectors", [](RunConfig& c, auto, const char* v) { c.sectors = v; }},
        {"events-file", [](RunConfig& c, auto, const char* v) { c.events_file = v; }},
        {"out", [](RunConfig& c, auto, const char* v) { c.out = v; }},
        {"format", [](RunConfig& c, auto, const char* v) { c.trade_format = v; }},
        {"quote-format", [](RunConfig& c, auto, const char* v) { c.quote_format = v; }},
        {"criterion.change", [](RunConfig& c, auto k, const char* v) { c.criterion.min_relative_change = to_double(k, v); }},
        {"criterion.duration", [](RunConfig& c, auto k, const char* v) { c.criterion.max_duration = to_double(k, v); }},
        {"criterion.trades",
         [](RunConfig& c, auto k, const char* v) { c.criterion.min_trades = static_cast<std::uint32_t>(to_unsigned(k, v)); }},
        {"criterion.pause", [](RunConfig& c, auto k, const char* v) { c.criterion.pause_threshold = to_double(k, v); }},
        {"recovery.n", [](RunConfig& c, auto k, const char* v) { c.recovery_n = to_unsigned(k, v); }},
        {"recovery.upper", [](RunConfig& c, auto k, const char* v) { c.recovery_upper = to_double(k, v); }},
        {"recovery.lower", [](RunConfig& c, auto k, const char* v) { c.recovery_lower = to_double(k, v); }},
        {"mechanism.major", [](RunConfig& c, auto k, const char* v) { c.jumps.major = to_double(k, v); }},
        {"mechanism.dominant", [](RunConfig& c, auto k, const char* v) { c.jumps.dominant = to_double(k, v); }},
        {"histogram.bin", [](RunConfig& c, auto k, const char* v) { c.histogram_bin = to_double(k, v); }},
        {"jobs", [](RunConfig& c, auto k, const char* v) { c.jobs = static_cast<unsigned>(to_unsigned(k, v)); }},
        {"seed", [](RunConfig& c, auto k, const char* v) { c.synth.seed = to_unsigned(k, v); }},
        {"synth.symbols", [](RunConfig& c, auto k, const char* v) { c.synth.symbols = to_unsigned(k, v); }},
        {"synth.venues", [](RunConfig& c, auto k, const char* v) { c.synth.venues = to_unsigned(k, v); }},
        {"synth.days", [](RunConfig& c, auto k, const char* v) { c.synth.days = to_unsigned(k, v); }},
        {"synth.trades", [](RunConfig& c, auto k, const char* v) { c.synth.trades_per_stream = to_unsigned(k, v); }},
        {"synth.events", [](RunConfig& c, auto k, const char* v) { c.synth.events = to_unsigned(k, v); }},
        {"synth.near-misses", [](RunConfig& c, auto k, const char* v) { c.synth.near_misses = to_unsigned(k, v); }},
        {"synth.post-trades", [](RunConfig& c, auto k, const char* v) { c.synth.post_trades = to_unsigned(k, v); }},
        {"synth.first-day",
         [](RunConfig& c, auto k, const char* v) {
             const auto d = uee::Date::parse(v);
             if (!d) throw uee::Error(uee::ErrorCode::invalid_argument, std::string(k) + ": expected YYYY-MM-DD");
             c.synth.first_day = *d;
         }},
    };
    return table;
}

uee::UeeCriterion criterion_from(const uee_criterion* c) {
    uee::UeeCriterion out;
    if (c) {
        out.min_relative_change = c->min_relative_change;
        out.max_duration = c->max_duration;
        out.min_trades = c->min_trades;
        out.pause_threshold = c->pause_threshold;
    }
    return out;
}

uee::Command command_from(const char* command) {
    const auto parsed = command ? uee::parse_command(command) : std::nullopt;
    if (!parsed) throw uee::Error(uee::ErrorCode::invalid_argument, std::string("unknown command: ") + (command ? command : "(null)"));
    return *parsed;
}

uee_status detect_with(const uee_trades* trades, const uee_criterion* criterion, uee_events** out, bool reference) {
    if (!trades || !out) return fail(UEE_INVALID_ARGUMENT, "null argument");
    if (!trades->prepared) return fail(UEE_INVALID_ARGUMENT, "trades not prepared");
    return guarded([&] {
        auto result = std::make_unique<uee_events>();
        const auto c = criterion_from(criterion);
        result->events = reference ? uee::oracle_detect(trades->key, trades->ticks, c)
                                   : uee::detect_uees(trades->key, trades->ticks, c);
        *out = result.release();
        return UEE_OK;
    });
}

}  // namespace

extern "C" {

const char* uee_last_error(void) { return last_error.c_str(); }

const char* uee_status_name(uee_status status) {
    switch (status) {
        case UEE_OK: return "ok";
        case UEE_INVALID_ARGUMENT: return "invalid_argument";
        case UEE_IO: return "io";
        case UEE_PARSE: return "parse";
        case UEE_INVARIANT: return "invariant";
        case UEE_EMPTY_INPUT: return "empty_input";
        case UEE_INSUFFICIENT_QUOTES: return "insufficient_quotes";
        case UEE_GENERATION: return "generation";
        case UEE_OVERLAP: return "overlap";
        case UEE_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* uee_version(void) { return "1.0.0"; }

uee_status uee_config_create(uee_config** out) {
    if (!out) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new uee_config{};
        return UEE_OK;
    });
}

void uee_config_destroy(uee_config* config) { delete config; }

uee_status uee_config_set(uee_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto it = setters().find(std::string_view(key));
        if (it == setters().end()) return fail(UEE_INVALID_ARGUMENT, std::string("unknown option: ") + key);
        it->second(config->run, key, value);
        return UEE_OK;
    });
}

uee_status uee_config_describe(const uee_config* config, const char* command, const char** json) {
    if (!config || !json) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto meta = config->run.metadata(command_from(command));
        meta["jobs"] = config->run.jobs;
        meta["out"] = config->run.out.generic_string();
        config->described = meta.dump(2);
        *json = config->described.c_str();
        return UEE_OK;
    });
}

uee_status uee_run(const uee_config* config, const char* command, uee_run_summary* summary) {
    if (!config) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto result = uee::run_command(command_from(command), config->run);
        if (summary) {
            summary->streams = result.streams;
            summary->trades = result.trades;
            summary->events = result.events;
            summary->rejected_rows = result.rejected_rows;
            summary->files_written = result.written.size();
        }
        return UEE_OK;
    });
}

int uee_exit_code(uee_status status) {
    switch (status) {
        case UEE_OK: return 0;
        case UEE_INVALID_ARGUMENT: return 1;
        case UEE_IO:
        case UEE_PARSE:
        case UEE_EMPTY_INPUT: return 2;
        default: return 3;
    }
}

void uee_criterion_default(uee_criterion* out) {
    if (!out) return;
    const uee::UeeCriterion c;
    *out = uee_criterion{c.min_relative_change, c.max_duration, c.min_trades, c.pause_threshold};
}

uee_status uee_trades_create(uee_trades** out) {
    if (!out) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new uee_trades{};
        return UEE_OK;
    });
}

void uee_trades_destroy(uee_trades* trades) { delete trades; }

uee_status uee_trades_append(uee_trades* trades, int64_t second, const char* price, int64_t size) {
    if (!trades || !price) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto p = uee::parse_price(price);
        if (!p || p->units <= 0) return fail(UEE_PARSE, std::string("bad price: ") + price);
        if (second < 0 || second >= 86'400) return fail(UEE_INVALID_ARGUMENT, "second outside the day");
        uee::TradeTick t;
        t.second = second;
        t.t = static_cast<double>(second);
        t.price = *p;
        t.size = size;
        t.seq = trades->ticks.size();
        trades->ticks.push_back(t);
        trades->prepared = false;
        return UEE_OK;
    });
}

uee_status uee_trades_prepare(uee_trades* trades) {
    if (!trades) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        uee::prepare_stream(trades->ticks);
        trades->prepared = true;
        return UEE_OK;
    });
}

size_t uee_trades_count(const uee_trades* trades) { return trades ? trades->ticks.size() : 0; }

uee_status uee_trades_time(const uee_trades* trades, size_t index, double* t) {
    if (!trades || !t) return fail(UEE_INVALID_ARGUMENT, "null argument");
    if (index >= trades->ticks.size()) return fail(UEE_INVALID_ARGUMENT, "trade index out of range");
    *t = trades->ticks[index].t;
    return UEE_OK;
}

uee_status uee_detect(const uee_trades* trades, const uee_criterion* criterion, uee_events** out) {
    return detect_with(trades, criterion, out, false);
}

uee_status uee_detect_reference(const uee_trades* trades, const uee_criterion* criterion, uee_events** out) {
    return detect_with(trades, criterion, out, true);
}

void uee_events_destroy(uee_events* events) { delete events; }

size_t uee_events_count(const uee_events* events) { return events ? events->events.size() : 0; }

uee_status uee_events_get(const uee_events* events, size_t index, uee_event* out) {
    if (!events || !out) return fail(UEE_INVALID_ARGUMENT, "null argument");
    if (index >= events->events.size()) return fail(UEE_INVALID_ARGUMENT, "event index out of range");
    const auto& e = events->events[index];
    out->direction = e.direction == uee::Direction::crash ? UEE_CRASH : UEE_SPIKE;
    out->start_index = e.start_index;
    out->end_index = e.end_index;
    out->t0_uee = e.t0_uee;
    out->t0_rec = e.t0_rec;
    out->size = e.size;
    out->end_trigger = static_cast<uee_end_trigger>(static_cast<int>(e.end_trigger));
    return UEE_OK;
}

uee_status uee_recovery_profile(const uee_trades* trades, const uee_events* events, size_t index, size_t horizon,
                                double* etas, size_t* available) {
    if (!trades || !events || !available || (horizon > 0 && !etas)) return fail(UEE_INVALID_ARGUMENT, "null argument");
    if (index >= events->events.size()) return fail(UEE_INVALID_ARGUMENT, "event index out of range");
    return guarded([&] {
        const auto p = uee::recovery_profile(trades->ticks, events->events[index], horizon, index);
        std::copy(p.etas.begin(), p.etas.end(), etas);
        *available = p.available;
        return UEE_OK;
    });
}

uee_status uee_classify_jump(double max_jump, double major, double dominant, uee_regime* out) {
    if (!out) return fail(UEE_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const uee::JumpThresholds t{major, dominant};
        t.validate();
        *out = static_cast<uee_regime>(static_cast<int>(uee::classify_regime(max_jump, t)));
        return UEE_OK;
    });
}

}  // extern "C"
