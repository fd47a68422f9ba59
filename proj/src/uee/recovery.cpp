#include "uee/recovery.hpp"

#include "uee/mechanism.hpp"

#include <algorithm>
#include <cmath>

namespace uee {

RecoveryProfile recovery_profile(std::span<const TradeTick> trades, const UeeEvent& event, std::size_t horizon,
                                 std::size_t event_id) {
    if (event.end_index >= trades.size() || event.start_index > event.end_index)
        throw Error(ErrorCode::invalid_argument, "event indices outside stream " + event.key.to_string());
    const Price start = trades[event.start_index].price;
    const Price extreme = trades[event.end_index].price;
    if (start == extreme) throw Error(ErrorCode::invalid_argument, "event without price deviation");

    RecoveryProfile profile;
    profile.event_id = event_id;
    profile.direction = event.direction;
    profile.available = std::min(horizon, trades.size() - 1 - event.end_index);
    profile.etas.reserve(profile.available);
    const auto denominator = static_cast<double>(extreme.units - start.units);
    for (std::size_t n = 1; n <= profile.available; ++n) {
        const Price later = trades[event.end_index + n].price;
        profile.etas.push_back(static_cast<double>(extreme.units - later.units) / denominator);
    }
    return profile;
}

namespace {

void fill_curve(ProbabilityCurve& curve, std::span<const RecoveryProfile* const> group, double upper, double lower,
                std::size_t horizon) {
    curve.up.assign(horizon, std::nullopt);
    curve.down.assign(horizon, std::nullopt);
    curve.population.assign(horizon, 0);
    for (std::size_t n = 1; n <= horizon; ++n) {
        std::uint64_t population = 0, up = 0, down = 0;
        for (const auto* p : group) {
            if (p->available < n) continue;
            ++population;
            const double eta = p->etas[n - 1];
            if (eta >= upper) ++up;
            if (eta <= lower) ++down;
        }
        curve.population[n - 1] = population;
        if (population == 0) continue;
        curve.up[n - 1] = static_cast<double>(up) / static_cast<double>(population);
        curve.down[n - 1] = static_cast<double>(down) / static_cast<double>(population);
    }
}

}  // namespace

RecoveryCurves recovery_probabilities(std::span<const RecoveryProfile> profiles, double upper, double lower,
                                      std::size_t horizon) {
    if (upper < lower) throw Error(ErrorCode::invalid_argument, "recovery thresholds: upper < lower");
    RecoveryCurves curves;
    curves.upper = upper;
    curves.lower = lower;
    curves.horizon = horizon;
    std::vector<const RecoveryProfile*> crash, spike, all;
    for (const auto& p : profiles) {
        all.push_back(&p);
        (p.direction == Direction::crash ? crash : spike).push_back(&p);
    }
    fill_curve(curves.crash, crash, upper, lower, horizon);
    fill_curve(curves.spike, spike, upper, lower, horizon);
    fill_curve(curves.all, all, upper, lower, horizon);
    return curves;
}

std::optional<std::size_t> EtaBins::index_of(double eta) const {
    if (!std::isfinite(eta)) return std::nullopt;
    const auto k = bin_index(eta - lo, width);
    if (k < 0 || static_cast<std::size_t>(k) >= count) return std::nullopt;
    return static_cast<std::size_t>(k);
}

LevelDensity recovery_level_density(std::span<const RecoveryProfile> profiles, const EtaBins& bins,
                                    std::size_t horizon) {
    if (!(bins.width > 0.0) || bins.count == 0) throw Error(ErrorCode::invalid_argument, "eta bins must be nonempty");
    LevelDensity d;
    d.bins = bins;
    d.horizon = horizon;
    d.crash.assign(horizon * bins.count, 0);
    d.spike.assign(horizon * bins.count, 0);
    for (const auto& p : profiles) {
        auto& cells = p.direction == Direction::crash ? d.crash : d.spike;
        const std::size_t limit = std::min(horizon, p.available);
        for (std::size_t n = 1; n <= limit; ++n) {
            const auto k = bins.index_of(p.etas[n - 1]);
            if (!k) {
                ++d.outside;
                continue;
            }
            ++cells[(n - 1) * bins.count + *k];
        }
    }
    return d;
}

}  // namespace uee
