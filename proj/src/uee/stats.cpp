#include "uee/stats.hpp"

#include "uee/mechanism.hpp"
#include "uee/tickstore.hpp"

#include <cmath>

namespace uee {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

SectorRow summarise(const std::string& sector, const std::vector<std::uint64_t>& per_company) {
    SectorRow row;
    row.sector = sector;
    row.companies = per_company.size();
    for (auto c : per_company) row.total += c;
    if (row.companies == 0) return row;
    const auto n = static_cast<double>(row.companies);
    row.per_company = static_cast<double>(row.total) / n;
    double ss = 0.0;
    for (auto c : per_company) {
        const double d = static_cast<double>(c) - row.per_company;
        ss += d * d;
    }
    row.std_dev = std::sqrt(ss / n);
    return row;
}

}  // namespace

SectorMap parse_sector_map(std::string_view data) {
    SectorMap map;
    std::size_t pos = 0, line_no = 0;
    bool first = true;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string_view::npos) eol = data.size();
        const auto line = trim(data.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos)
            throw Error(ErrorCode::parse, "sector map line " + std::to_string(line_no) + ": expected ticker,sector");
        const auto ticker = trim(line.substr(0, comma));
        const auto sector = trim(line.substr(comma + 1));
        if (first) {
            first = false;
            if (ticker == "ticker" || ticker == "symbol") continue;
        }
        if (ticker.empty() || sector.empty())
            throw Error(ErrorCode::parse, "sector map line " + std::to_string(line_no) + ": empty field");
        map[std::string(ticker)] = std::string(sector);
    }
    return map;
}

SectorMap load_sector_map(const std::filesystem::path& path) { return parse_sector_map(read_file(path)); }

SectorTable sector_stats(std::span<const UeeEvent> events, const SectorMap& sectors) {
    std::map<std::string, std::uint64_t> per_ticker;
    for (const auto& e : events) ++per_ticker[e.key.symbol];

    std::map<std::string, std::vector<std::uint64_t>> grouped;
    for (const auto& [ticker, sector] : sectors) {
        const auto it = per_ticker.find(ticker);
        grouped[sector].push_back(it == per_ticker.end() ? 0 : it->second);
    }
    SectorTable table;
    std::vector<std::uint64_t> unmapped;
    for (const auto& [ticker, count] : per_ticker) {
        if (sectors.count(ticker)) continue;
        unmapped.push_back(count);
        table.unclassified_events += count;
    }
    for (const auto& [sector, counts] : grouped) {
        if (sector == kUnclassified) continue;
        table.rows.push_back(summarise(sector, counts));
    }
    // Tickers mapped explicitly to "unclassified" join the unmapped bucket.
    if (const auto it = grouped.find(kUnclassified); it != grouped.end())
        unmapped.insert(unmapped.end(), it->second.begin(), it->second.end());
    if (!unmapped.empty()) table.rows.push_back(summarise(kUnclassified, unmapped));
    return table;
}

std::map<std::uint32_t, std::uint64_t> cooccurrence_histogram(std::span<const UeeEvent> events) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint32_t> per_second;
    for (const auto& e : events)
        ++per_second[{e.key.day.days_since_epoch(), static_cast<std::int64_t>(std::floor(e.t0_uee))}];
    std::map<std::uint32_t, std::uint64_t> hist;
    for (const auto& [second, k] : per_second) ++hist[k];
    return hist;
}

std::map<IsoWeek, std::uint64_t> weekly_counts(std::span<const UeeEvent> events) {
    std::map<IsoWeek, std::uint64_t> weeks;
    for (const auto& e : events) ++weeks[IsoWeek::of(e.key.day)];
    return weeks;
}

SizeHistogram size_histogram(std::span<const UeeEvent> events, double bin_width, double tail_threshold) {
    if (!(bin_width > 0.0)) throw Error(ErrorCode::invalid_argument, "bin width must be > 0");
    SizeHistogram h;
    h.bin_width = bin_width;
    h.tail_threshold = tail_threshold;
    for (const auto& e : events) {
        const double magnitude = std::fabs(e.size);
        const auto k = bin_index(magnitude, bin_width);
        const bool tail = magnitude > tail_threshold;
        if (e.direction == Direction::crash) {
            ++h.crash[k];
            h.crash_tail += tail;
        } else {
            ++h.spike[k];
            h.spike_tail += tail;
        }
    }
    return h;
}

DirectionShares direction_shares(std::span<const UeeEvent> events) {
    if (events.empty()) throw Error(ErrorCode::empty_input, "direction_shares: no events");
    DirectionShares s;
    std::size_t crashes = 0;
    double crash_sum = 0.0, spike_sum = 0.0;
    for (const auto& e : events) {
        if (e.direction == Direction::crash) {
            ++crashes;
            crash_sum += e.size;
        } else {
            spike_sum += e.size;
        }
    }
    const std::size_t spikes = events.size() - crashes;
    s.count = events.size();
    s.crash = static_cast<double>(crashes) / static_cast<double>(s.count);
    s.spike = static_cast<double>(spikes) / static_cast<double>(s.count);
    s.mean_crash_size = crashes ? crash_sum / static_cast<double>(crashes) : 0.0;
    s.mean_spike_size = spikes ? spike_sum / static_cast<double>(spikes) : 0.0;
    return s;
}

StatsReport build_report(std::span<const UeeEvent> events, const SectorMap& sectors, double size_bin) {
    StatsReport r;
    r.total_events = events.size();
    r.sectors = sector_stats(events, sectors);
    r.cooccurrence = cooccurrence_histogram(events);
    r.weekly = weekly_counts(events);
    r.sizes = size_histogram(events, size_bin);
    if (!events.empty()) {
        r.directions = direction_shares(events);
        r.triggers = end_trigger_shares(events);
    }
    return r;
}

void check_identities(const StatsReport& report, double min_relative_change) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::invariant, "counting identity violated: " + what); };

    std::uint64_t weighted = 0;
    for (const auto& [k, count] : report.cooccurrence) weighted += static_cast<std::uint64_t>(k) * count;
    if (weighted != report.total_events) fail("sum k*cooccurrence(k) != total events");

    std::uint64_t weekly = 0;
    for (const auto& [w, count] : report.weekly) weekly += count;
    if (weekly != report.total_events) fail("sum of weekly counts != total events");

    std::uint64_t sectors = 0;
    for (const auto& row : report.sectors.rows) sectors += row.total;
    if (sectors != report.total_events) fail("sum of sector totals != total events");

    std::uint64_t binned = 0;
    const auto gap_bins = bin_index(min_relative_change, report.sizes.bin_width);
    for (const auto* side : {&report.sizes.crash, &report.sizes.spike}) {
        for (const auto& [k, count] : *side) {
            binned += count;
            if (k < gap_bins) fail("size histogram populated inside the criterion gap");
        }
    }
    if (binned != report.total_events) fail("size histogram mass != total events");
}

}  // namespace uee
