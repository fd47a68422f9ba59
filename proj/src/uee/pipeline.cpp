#include "uee/pipeline.hpp"

#include "uee/recovery.hpp"
#include "uee/stats.hpp"
#include "uee/tickstore.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace uee {
namespace fs = std::filesystem;

std::string_view to_string(Command command) {
    switch (command) {
        case Command::detect: return "detect";
        case Command::mechanism: return "mechanism";
        case Command::recover: return "recover";
        case Command::report: return "report";
        case Command::synth: return "synth";
    }
    return "detect";
}

std::optional<Command> parse_command(std::string_view text) {
    for (auto c : {Command::detect, Command::mechanism, Command::recover, Command::report, Command::synth}) {
        if (to_string(c) == text) return c;
    }
    return std::nullopt;
}

int exit_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return 1;
        case ErrorCode::io:
        case ErrorCode::parse:
        case ErrorCode::empty_input: return 2;
        default: return 3;
    }
}

void RunConfig::validate() const {
    criterion.validate();
    jumps.validate();
    if (recovery_n == 0) throw Error(ErrorCode::invalid_argument, "recovery.n must be >= 1");
    if (recovery_upper < recovery_lower) throw Error(ErrorCode::invalid_argument, "recovery.upper < recovery.lower");
    if (!(histogram_bin > 0.0)) throw Error(ErrorCode::invalid_argument, "histogram bin must be > 0");
    if (jobs == 0) throw Error(ErrorCode::invalid_argument, "jobs must be >= 1");
    if (!trade_format.empty()) FormatDescriptor::from_names(trade_format);
    if (!quote_format.empty()) FormatDescriptor::from_names(quote_format);
}

Json RunConfig::metadata(Command command) const {
    Json m;
    m["tool"] = "uee";
    m["version"] = "1.0.0";
    m["command"] = std::string(to_string(command));
    m["criterion"] = {{"change", round9(criterion.min_relative_change)},
                      {"duration", round9(criterion.max_duration)},
                      {"trades", criterion.min_trades},
                      {"pause", round9(criterion.pause_threshold)}};
    m["recovery"] = {{"n", recovery_n},
                     {"upper", round9(recovery_upper)},
                     {"lower", round9(recovery_lower)},
                     {"denominator", "per-n: profiles with at least n trades after the extremum"}};
    m["mechanism"] = {{"major", round9(jumps.major)}, {"dominant", round9(jumps.dominant)}};
    m["histogram_bin"] = round9(histogram_bin);
    m["inputs"] = {{"trades", trades.generic_string()},
                   {"quotes", quotes.generic_string()},
                   {"sectors", sectors.generic_string()},
                   {"events", events_file.generic_string()}};
    m["format"] = {{"trades", trade_format.empty() ? "symbol,venue,date,time,price,size" : trade_format},
                   {"quotes", quote_format.empty() ? "symbol,venue,date,time,bid,ask" : quote_format}};
    m["seed"] = synth.seed;
    if (command == Command::synth) {
        m["synth"] = {{"symbols", synth.symbols},
                      {"venues", synth.venues},
                      {"days", synth.days},
                      {"trades_per_stream", synth.trades_per_stream},
                      {"events", synth.events},
                      {"near_misses", synth.near_misses},
                      {"post_trades", synth.post_trades},
                      {"first_day", synth.first_day.to_string()}};
    }
    return m;
}

std::vector<fs::path> input_files(const fs::path& path) {
    std::error_code ec;
    if (path.empty()) throw Error(ErrorCode::invalid_argument, "missing input path");
    if (!fs::exists(path, ec)) throw Error(ErrorCode::io, "input '" + path.string() + "' does not exist");
    if (!fs::is_directory(path, ec)) return {path};
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
        if (entry.is_regular_file() && entry.path().filename().string().front() != '.') files.push_back(entry.path());
    }
    if (ec) throw Error(ErrorCode::io, "cannot list '" + path.string() + "': " + ec.message());
    if (files.empty()) throw Error(ErrorCode::empty_input, "no input files in '" + path.string() + "'");
    std::sort(files.begin(), files.end());
    return files;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::max(1u, jobs));
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

struct TradeData {
    std::vector<StreamKey> keys;
    std::vector<std::vector<TradeTick>> streams;  // parallel to keys, prepared
    std::size_t trades = 0;
    std::size_t rejected = 0;
};

template <class Tick, class Loader>
void load_streams(const fs::path& input, const FormatDescriptor& format, Loader load, unsigned jobs,
                  std::vector<StreamKey>& keys, std::vector<std::vector<Tick>>& streams, std::size_t& rows,
                  std::size_t& rejected) {
    ParsedTicks<Tick> parsed;
    for (const auto& file : input_files(input)) load(file, format, parsed);
    rejected = parsed.diagnostics.size();
    auto map = partition_streams(std::move(parsed));
    for (auto& [key, ticks] : map) {
        rows += ticks.size();
        keys.push_back(key);
        streams.push_back(std::move(ticks));
    }
    parallel_for(streams.size(), jobs, [&](std::size_t i) { prepare_stream(streams[i]); });
}

TradeData load_trade_streams(const RunConfig& config) {
    TradeData data;
    const auto format = config.trade_format.empty() ? FormatDescriptor::trades()
                                                    : FormatDescriptor::from_names(config.trade_format);
    load_streams<TradeTick>(config.trades, format, load_trades, config.jobs, data.keys, data.streams, data.trades,
                            data.rejected);
    return data;
}

struct QuoteData {
    std::map<StreamKey, std::vector<QuoteTick>> streams;
    std::size_t rejected = 0;
};

QuoteData load_quote_streams(const RunConfig& config) {
    QuoteData data;
    const auto format = config.quote_format.empty() ? FormatDescriptor::quotes()
                                                    : FormatDescriptor::from_names(config.quote_format);
    std::vector<StreamKey> keys;
    std::vector<std::vector<QuoteTick>> streams;
    std::size_t rows = 0;
    load_streams<QuoteTick>(config.quotes, format, load_quotes, config.jobs, keys, streams, rows, data.rejected);
    for (std::size_t i = 0; i < keys.size(); ++i) data.streams.emplace(keys[i], std::move(streams[i]));
    return data;
}

std::vector<UeeEvent> detect_all(const TradeData& data, const RunConfig& config) {
    std::vector<std::vector<UeeEvent>> per_stream(data.streams.size());
    parallel_for(data.streams.size(), config.jobs, [&](std::size_t i) {
        per_stream[i] = detect_uees(data.keys[i], data.streams[i], config.criterion);
    });
    std::vector<UeeEvent> events;
    for (auto& v : per_stream) events.insert(events.end(), v.begin(), v.end());
    return events;
}

const std::vector<TradeTick>& stream_for(const TradeData& data, const StreamKey& key) {
    const auto it = std::lower_bound(data.keys.begin(), data.keys.end(), key);
    if (it == data.keys.end() || !(*it == key))
        throw Error(ErrorCode::parse, "event on " + key.to_string() + " has no trades in the input");
    return data.streams[static_cast<std::size_t>(it - data.keys.begin())];
}

// Events read back from a file carry rounded times; take them from the trades
// and reject records that do not belong to these trades.
void rebind(std::vector<UeeEvent>& events, const TradeData& data) {
    for (auto& e : events) {
        const auto& trades = stream_for(data, e.key);
        if (e.end_index >= trades.size() || trades[e.start_index].price != e.price_start ||
            trades[e.end_index].price != e.price_extreme)
            throw Error(ErrorCode::parse, "event on " + e.key.to_string() + " does not match the trades");
        e.t0_uee = trades[e.start_index].t;
        e.t0_rec = trades[e.end_index].t;
    }
}

std::string id_key(std::size_t id, const UeeEvent& e) { return std::to_string(id) + "," + e.key.to_string(); }

template <class Map>
Json bins_json(const Map& bins, double width) {
    Json out = Json::array();
    for (const auto& [k, count] : bins) {
        out.push_back({{"bin", k},
                       {"lo", round9(static_cast<double>(k) * width)},
                       {"hi", round9(static_cast<double>(k + 1) * width)},
                       {"count", count}});
    }
    return out;
}

Json shares_json(const RegimeShares& s) {
    return {{"single_order_dominant", round9(s.dominant)},
            {"single_order_major", round9(s.major)},
            {"incremental", round9(s.incremental)},
            {"count", s.count}};
}

Json directions_json(const std::optional<DirectionShares>& d) {
    if (!d) return nullptr;
    return {{"crash", round9(d->crash)},
            {"spike", round9(d->spike)},
            {"mean_crash_size", round9(d->mean_crash_size)},
            {"mean_spike_size", round9(d->mean_spike_size)}};
}

Json triggers_json(std::span<const UeeEvent> events, bool exclude_stream_end) {
    bool any = false;
    for (const auto& e : events) any |= !exclude_stream_end || e.end_trigger != EndTrigger::stream_end;
    if (!any) return nullptr;
    const auto t = end_trigger_shares(events, exclude_stream_end);
    Json j = {{"trend_reversal", round9(t.trend_reversal)}, {"trading_pause", round9(t.trading_pause)}};
    if (!exclude_stream_end) j["stream_end"] = round9(t.stream_end);
    j["counted"] = t.counted;
    return j;
}

class Writer {
public:
    Writer(const RunConfig& config, Command command, RunResult& result)
        : dir_(config.out), meta_(config.metadata(command)), result_(result) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::io, "cannot create '" + dir_.string() + "': " + ec.message());
    }

    const Json& meta() const { return meta_; }
    void raw(const std::string& name, const std::string& content) {
        write_text_file(dir_ / name, content);
        result_.written.push_back(dir_ / name);
    }
    void csv(const std::string& name, const std::string& body) { raw(name, csv_meta_block(meta_) + body); }
    void json(const std::string& name, Json body) {
        Json doc;
        doc["meta"] = meta_;
        for (auto& [k, v] : body.items()) doc[k] = std::move(v);
        raw(name, doc.dump(2) + "\n");
    }

private:
    fs::path dir_;
    Json meta_;
    RunResult& result_;
};

struct Inputs {
    TradeData trades;
    std::vector<UeeEvent> events;
};

Inputs events_for(const RunConfig& config, bool need_trades, RunResult& result) {
    Inputs in;
    if (need_trades || config.events_file.empty()) {
        in.trades = load_trade_streams(config);
        result.streams = in.trades.keys.size();
        result.trades = in.trades.trades;
        result.rejected_rows = in.trades.rejected;
    }
    if (config.events_file.empty()) {
        in.events = detect_all(in.trades, config);
    } else {
        in.events = read_events_jsonl(config.events_file);
        if (need_trades) rebind(in.events, in.trades);
    }
    result.events = in.events.size();
    return in;
}

void cmd_detect(const RunConfig& config, RunResult& result) {
    Inputs in = events_for(config, true, result);
    if (in.trades.keys.empty()) throw Error(ErrorCode::empty_input, "no trades in the input");
    Writer out(config, Command::detect, result);
    out.raw("events.jsonl", events_jsonl(in.events, out.meta()));
    out.raw("events.csv", events_csv(in.events, out.meta()));

    std::size_t crashes = 0;
    for (const auto& e : in.events) crashes += e.direction == Direction::crash;
    Json summary;
    summary["streams"] = result.streams;
    summary["trades"] = result.trades;
    summary["rejected_rows"] = result.rejected_rows;
    summary["events"] = in.events.size();
    summary["crashes"] = crashes;
    summary["spikes"] = in.events.size() - crashes;
    summary["directions"] = in.events.empty() ? Json(nullptr) : directions_json(direction_shares(in.events));
    summary["end_triggers"] = triggers_json(in.events, false);
    summary["end_triggers_excluding_stream_end"] = triggers_json(in.events, true);
    out.json("detect_summary.json", std::move(summary));
}

void cmd_mechanism(const RunConfig& config, RunResult& result) {
    Inputs in = events_for(config, true, result);
    const QuoteData quotes = load_quote_streams(config);

    std::vector<std::optional<TriggerClassification>> slots(in.events.size());
    parallel_for(in.events.size(), config.jobs, [&](std::size_t id) {
        const auto& e = in.events[id];
        const auto it = quotes.streams.find(e.key);
        if (it == quotes.streams.end()) return;
        try {
            slots[id] = classify_trigger(id, e.direction, max_quote_jump(it->second, e), config.jumps);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::insufficient_quotes) throw;
        }
    });
    std::vector<TriggerClassification> classified;
    Json uncovered = Json::array();
    for (std::size_t id = 0; id < slots.size(); ++id) {
        if (slots[id]) classified.push_back(*slots[id]);
        else uncovered.push_back(id);
    }

    Writer out(config, Command::mechanism, result);
    std::string csv = "id,key,direction,max_jump,regime\n";
    for (const auto& c : classified) {
        csv += id_key(c.event_id, in.events[c.event_id]) + "," + std::string(to_string(c.direction)) + "," +
               fmt9(c.max_jump) + "," + std::string(to_string(c.regime)) + "\n";
    }
    out.csv("classification.csv", csv);

    const auto h = mechanism_histogram(classified, config.histogram_bin, config.jumps);
    Json body;
    body["events"] = in.events.size();
    body["classified"] = classified.size();
    body["coverage"] = in.events.empty() ? 1.0 : round9(static_cast<double>(classified.size()) /
                                                         static_cast<double>(in.events.size()));
    body["uncovered_ids"] = std::move(uncovered);
    body["bin_width"] = round9(h.bin_width);
    body["crash_bins"] = bins_json(h.crash, h.bin_width);
    body["spike_bins"] = bins_json(h.spike, h.bin_width);
    body["shares"] = {{"crash", shares_json(h.crash_shares)},
                      {"spike", shares_json(h.spike_shares)},
                      {"all", shares_json(h.all_shares)}};
    out.json("mechanism_histogram.json", std::move(body));
}

void cmd_recover(const RunConfig& config, RunResult& result) {
    Inputs in = events_for(config, true, result);
    const std::size_t horizon = config.recovery_n;
    std::vector<RecoveryProfile> profiles(in.events.size());
    parallel_for(in.events.size(), config.jobs, [&](std::size_t id) {
        const auto& e = in.events[id];
        profiles[id] = recovery_profile(stream_for(in.trades, e.key), e, horizon, id);
    });

    Writer out(config, Command::recover, result);
    std::string header = "id,key";
    for (std::size_t n = 1; n <= horizon; ++n) header += ",eta_" + std::to_string(n);
    header += "\n";
    std::string crash = header, spike = header;
    for (const auto& p : profiles) {
        std::string row = id_key(p.event_id, in.events[p.event_id]);
        for (std::size_t n = 1; n <= horizon; ++n) row += n <= p.available ? "," + fmt9(p.etas[n - 1]) : ",";
        (p.direction == Direction::crash ? crash : spike) += row + "\n";
    }
    out.csv("profiles_crash.csv", crash);
    out.csv("profiles_spike.csv", spike);

    const auto curves = recovery_probabilities(profiles, config.recovery_upper, config.recovery_lower, horizon);
    auto cell = [](const std::optional<double>& v) { return v ? fmt9(*v) : std::string(); };
    std::string csv = "n,P_up_crash,P_down_crash,P_up_spike,P_down_spike,P_up_all,P_down_all,"
                      "population_crash,population_spike\n";
    for (std::size_t n = 1; n <= horizon; ++n) {
        const std::size_t i = n - 1;
        csv += std::to_string(n) + "," + cell(curves.crash.up[i]) + "," + cell(curves.crash.down[i]) + "," +
               cell(curves.spike.up[i]) + "," + cell(curves.spike.down[i]) + "," + cell(curves.all.up[i]) + "," +
               cell(curves.all.down[i]) + "," + std::to_string(curves.crash.population[i]) + "," +
               std::to_string(curves.spike.population[i]) + "\n";
    }
    out.csv("curves.csv", csv);

    const auto density = recovery_level_density(profiles, EtaBins{}, horizon);
    std::string dheader = "n";
    for (std::size_t k = 0; k < density.bins.count; ++k) dheader += ",eta_" + fmt9(round9(density.bins.edge(k)));
    dheader += "\n";
    std::string dcrash = dheader, dspike = dheader;
    for (std::size_t n = 1; n <= horizon; ++n) {
        dcrash += std::to_string(n);
        dspike += std::to_string(n);
        for (std::size_t k = 0; k < density.bins.count; ++k) {
            dcrash += "," + std::to_string(density.crash_at(n, k));
            dspike += "," + std::to_string(density.spike_at(n, k));
        }
        dcrash += "\n";
        dspike += "\n";
    }
    out.csv("density_crash.csv", dcrash + "# outside_range: " + std::to_string(density.outside) + "\n");
    out.csv("density_spike.csv", dspike);
}

void cmd_report(const RunConfig& config, RunResult& result) {
    Inputs in = events_for(config, false, result);
    const SectorMap sectors = config.sectors.empty() ? SectorMap{} : load_sector_map(config.sectors);
    const auto report = build_report(in.events, sectors, config.histogram_bin);
    check_identities(report, config.criterion.min_relative_change);

    Writer out(config, Command::report, result);
    std::string csv = "sector,companies,total,per_company,std_dev\n";
    for (const auto& row : report.sectors.rows) {
        csv += row.sector + "," + std::to_string(row.companies) + "," + std::to_string(row.total) + "," +
               fmt9(row.per_company) + "," + fmt9(row.std_dev) + "\n";
    }
    out.csv("sectors.csv", csv);

    csv = "k,seconds\n";
    for (const auto& [k, count] : report.cooccurrence) csv += std::to_string(k) + "," + std::to_string(count) + "\n";
    out.csv("cooccurrence.csv", csv);

    csv = "week,events\n";
    for (const auto& [week, count] : report.weekly) csv += week.to_string() + "," + std::to_string(count) + "\n";
    out.csv("weekly.csv", csv);

    csv = "direction,bin,lo,hi,events\n";
    for (const auto& [name, bins] : {std::pair{"crash", &report.sizes.crash}, std::pair{"spike", &report.sizes.spike}}) {
        for (const auto& [k, count] : *bins) {
            csv += std::string(name) + "," + std::to_string(k) + "," + fmt9(static_cast<double>(k) * report.sizes.bin_width) +
                   "," + fmt9(static_cast<double>(k + 1) * report.sizes.bin_width) + "," + std::to_string(count) + "\n";
        }
    }
    out.csv("size_histogram.csv", csv);

    Json body;
    body["total_events"] = report.total_events;
    body["directions"] = directions_json(report.directions);
    body["end_triggers"] = triggers_json(in.events, false);
    body["end_triggers_excluding_stream_end"] = triggers_json(in.events, true);
    body["unclassified_events"] = report.sectors.unclassified_events;
    body["size_tail"] = {{"threshold", round9(report.sizes.tail_threshold)},
                         {"crash", report.sizes.crash_tail},
                         {"spike", report.sizes.spike_tail}};
    body["identities"] = "ok";
    out.json("report.json", std::move(body));
}

void cmd_synth(const RunConfig& config, RunResult& result) {
    const auto bundle = generate_bundle(config.synth, config.criterion);
    Writer out(config, Command::synth, result);
    write_bundle(bundle, config.out, out.meta());
    for (const char* name : {"trades.csv", "quotes.csv", "sectors.csv", "ground_truth.json"})
        result.written.push_back(config.out / name);
    result.streams = bundle.streams.size();
    for (const auto& s : bundle.streams) result.trades += s.trades.size();
    result.events = bundle.truth.size();
}

}  // namespace

RunResult run_command(Command command, const RunConfig& config) {
    config.validate();
    RunResult result;
    switch (command) {
        case Command::detect: cmd_detect(config, result); break;
        case Command::mechanism: cmd_mechanism(config, result); break;
        case Command::recover: cmd_recover(config, result); break;
        case Command::report: cmd_report(config, result); break;
        case Command::synth: cmd_synth(config, result); break;
    }
    return result;
}

}  // namespace uee
