#pragma once

// Trade/quote ingestion. Rows carry second-resolution timestamps; streams are
// keyed by (symbol, venue, day) and, once ordered, trades sharing a second are
// spread equidistantly across it (first trade on the integer second).

#include "uee/types.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uee {

struct TradeTick {
    std::int64_t second = 0;  // integer seconds since midnight, as read
    double t = 0.0;           // fractional seconds after subsecond assignment
    Price price;
    std::int64_t size = 0;
    std::uint64_t seq = 0;    // arrival ordinal within the stream
};

struct QuoteTick {
    std::int64_t second = 0;
    double t = 0.0;
    Price bid;
    Price ask;
    std::uint64_t seq = 0;
    bool crossed = false;  // bid >= ask; kept, only flagged
};

struct Diagnostic {
    std::size_t line = 0;  // 1-based line number in the source
    std::string message;
};

// Column layout of a delimited tick file. Indices are zero-based; -1 means
// the column is absent (price/size for quote files, bid/ask for trade files).
struct FormatDescriptor {
    char delimiter = ',';
    int symbol = 0;
    int venue = 1;
    int date = 2;
    int time = 3;
    int price = 4;
    int size = 5;
    int bid = -1;
    int ask = -1;

    static FormatDescriptor trades();
    static FormatDescriptor quotes();
    // Column order given by name, e.g. "venue,symbol,date,time,price,size";
    // "_" skips a column. A leading "tsv:" switches the delimiter to tab.
    static FormatDescriptor from_names(std::string_view spec);
    int column_count() const;
};

template <class Tick>
struct ParsedTicks {
    std::vector<StreamKey> keys;
    std::vector<std::uint32_t> stream_of;  // parallel to ticks, index into keys
    std::vector<Tick> ticks;
    std::vector<Diagnostic> diagnostics;
    std::size_t rows = 0;  // data rows seen (excluding header, blank lines)
};

using ParsedTrades = ParsedTicks<TradeTick>;
using ParsedQuotes = ParsedTicks<QuoteTick>;

ParsedTrades parse_trades(std::string_view data, const FormatDescriptor& format = FormatDescriptor::trades());
ParsedQuotes parse_quotes(std::string_view data, const FormatDescriptor& format = FormatDescriptor::quotes());

// Appends the rows of `path` into `into`; keys are shared across calls so
// several files can feed one set of streams. Throws Error(io).
void load_trades(const std::filesystem::path& path, const FormatDescriptor& format, ParsedTrades& into);
void load_quotes(const std::filesystem::path& path, const FormatDescriptor& format, ParsedQuotes& into);

std::string read_file(const std::filesystem::path& path);

// Stable ordering by integer second, then seq.
template <class Tick>
void order_stream(std::vector<Tick>& ticks) {
    std::stable_sort(ticks.begin(), ticks.end(), [](const Tick& a, const Tick& b) {
        return a.second != b.second ? a.second < b.second : a.seq < b.seq;
    });
}

// The m ticks of second s receive t = s + k/m, k = 0..m-1.
template <class Tick>
void assign_subsecond_timestamps(std::span<Tick> ticks) {
    std::size_t begin = 0;
    while (begin < ticks.size()) {
        std::size_t end = begin + 1;
        while (end < ticks.size() && ticks[end].second == ticks[begin].second) ++end;
        const auto m = static_cast<double>(end - begin);
        const auto s = static_cast<double>(ticks[begin].second);
        for (std::size_t k = begin; k < end; ++k) ticks[k].t = s + static_cast<double>(k - begin) / m;
        begin = end;
    }
}

template <class Tick>
using StreamMap = std::map<StreamKey, std::vector<Tick>>;

template <class Tick>
StreamMap<Tick> partition_streams(ParsedTicks<Tick>&& parsed) {
    std::vector<std::size_t> counts(parsed.keys.size(), 0);
    for (auto s : parsed.stream_of) ++counts[s];
    std::vector<std::vector<Tick>> buckets(parsed.keys.size());
    for (std::size_t k = 0; k < buckets.size(); ++k) buckets[k].reserve(counts[k]);
    for (std::size_t i = 0; i < parsed.ticks.size(); ++i) buckets[parsed.stream_of[i]].push_back(parsed.ticks[i]);
    parsed.ticks.clear();
    parsed.ticks.shrink_to_fit();
    parsed.stream_of.clear();
    parsed.stream_of.shrink_to_fit();

    StreamMap<Tick> out;
    for (std::size_t k = 0; k < buckets.size(); ++k) {
        if (!buckets[k].empty()) out.emplace(parsed.keys[k], std::move(buckets[k]));
    }
    return out;
}

// order_stream followed by assign_subsecond_timestamps.
template <class Tick>
void prepare_stream(std::vector<Tick>& ticks) {
    order_stream(ticks);
    assign_subsecond_timestamps(std::span<Tick>(ticks));
}

}  // namespace uee
