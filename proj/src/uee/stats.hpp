#pragma once

// Aggregate tables over a detected event set: per-sector counts, same-second
// co-occurrence, weekly counts, the signed size histogram and direction shares.

#include "uee/detector.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uee {

inline constexpr const char* kUnclassified = "unclassified";

// ticker -> sector label
using SectorMap = std::map<std::string, std::string>;

// "ticker,sector" rows; header optional. Throws Error(parse) on malformed rows.
SectorMap parse_sector_map(std::string_view data);
SectorMap load_sector_map(const std::filesystem::path& path);

struct SectorRow {
    std::string sector;
    std::size_t companies = 0;
    std::uint64_t total = 0;
    double per_company = 0.0;
    double std_dev = 0.0;  // population sigma over per-company counts, zeros included
};

struct SectorTable {
    std::vector<SectorRow> rows;  // sorted by sector, unclassified last
    std::uint64_t unclassified_events = 0;
};

SectorTable sector_stats(std::span<const UeeEvent> events, const SectorMap& sectors);

// k -> number of wall-clock seconds (day, floor(t0_uee)) holding exactly k event starts.
std::map<std::uint32_t, std::uint64_t> cooccurrence_histogram(std::span<const UeeEvent> events);

std::map<IsoWeek, std::uint64_t> weekly_counts(std::span<const UeeEvent> events);

// Signed bins: crash sizes fall in (-(k+1)w, -kw], spike sizes in [kw, (k+1)w).
struct SizeHistogram {
    double bin_width = 0.001;
    std::map<std::int64_t, std::uint64_t> crash;  // keyed by magnitude bin k
    std::map<std::int64_t, std::uint64_t> spike;
    std::uint64_t crash_tail = 0;  // |size| > tail_threshold
    std::uint64_t spike_tail = 0;
    double tail_threshold = 0.05;
};

SizeHistogram size_histogram(std::span<const UeeEvent> events, double bin_width = 0.001,
                             double tail_threshold = 0.05);

struct DirectionShares {
    double crash = 0.0;
    double spike = 0.0;
    std::size_t count = 0;
    double mean_crash_size = 0.0;
    double mean_spike_size = 0.0;
};

// Throws Error(empty_input) for an empty event list.
DirectionShares direction_shares(std::span<const UeeEvent> events);

struct StatsReport {
    std::uint64_t total_events = 0;
    SectorTable sectors;
    std::map<std::uint32_t, std::uint64_t> cooccurrence;
    std::map<IsoWeek, std::uint64_t> weekly;
    SizeHistogram sizes;
    std::optional<DirectionShares> directions;
    std::optional<TriggerShares> triggers;
};

StatsReport build_report(std::span<const UeeEvent> events, const SectorMap& sectors, double size_bin = 0.001);

// Counting identities; throws Error(invariant) naming the first violation.
void check_identities(const StatsReport& report, double min_relative_change);

}  // namespace uee
