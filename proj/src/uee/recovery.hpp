#pragma once

// Post-event recovery: eta_n = (S_rec - S_n) / (S_rec - S_uee) for the n-th
// trade after the extremum, where S_uee is the price at event start and
// S_rec the extremum price. 0 means no recovery, 1 full recovery.

#include "uee/detector.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uee {

struct RecoveryProfile {
    std::size_t event_id = 0;
    Direction direction = Direction::crash;
    std::vector<double> etas;  // etas[n-1] = eta_n, size == available
    std::size_t available = 0;
};

RecoveryProfile recovery_profile(std::span<const TradeTick> trades, const UeeEvent& event, std::size_t horizon,
                                 std::size_t event_id = 0);

struct ProbabilityCurve {
    std::vector<std::optional<double>> up;    // P(eta_n >= upper), index n-1
    std::vector<std::optional<double>> down;  // P(eta_n <= lower)
    std::vector<std::uint64_t> population;    // profiles with available >= n
};

struct RecoveryCurves {
    double upper = 0.8;
    double lower = 0.2;
    std::size_t horizon = 0;
    ProbabilityCurve crash;
    ProbabilityCurve spike;
    ProbabilityCurve all;
};

RecoveryCurves recovery_probabilities(std::span<const RecoveryProfile> profiles, double upper = 0.8,
                                      double lower = 0.2, std::size_t horizon = 100);

struct EtaBins {
    double lo = -1.0;
    double width = 0.1;
    std::size_t count = 30;

    double edge(std::size_t k) const { return lo + width * static_cast<double>(k); }
    std::optional<std::size_t> index_of(double eta) const;
};

// cells[(n-1) * bins.count + k] counts profiles whose eta_n falls in bin k.
struct LevelDensity {
    EtaBins bins;
    std::size_t horizon = 0;
    std::vector<std::uint64_t> crash;
    std::vector<std::uint64_t> spike;
    std::uint64_t outside = 0;  // (n, eta) samples beyond the bin range

    std::uint64_t crash_at(std::size_t n, std::size_t k) const { return crash[(n - 1) * bins.count + k]; }
    std::uint64_t spike_at(std::size_t n, std::size_t k) const { return spike[(n - 1) * bins.count + k]; }
};

LevelDensity recovery_level_density(std::span<const RecoveryProfile> profiles, const EtaBins& bins,
                                    std::size_t horizon);

}  // namespace uee
