#pragma once

// Shared small-scale world for engine and acceptance tests: L=4, M=2 over the
// shipped link budget, 16 radar actions, 16 jammer actions.

#include <cstdint>
#include <vector>

#include "fara/config.hpp"
#include "fara/engine.hpp"
#include "fara/jammer.hpp"
#include "fara/link_budget.hpp"

namespace desk {

struct Desk {
    fara::FrequencySet freqs;
    fara::RadarActionSet radar;
    fara::JammerActionSet jam_set;
    fara::ReceivedPowers powers;
    fara::CostMatrix cost;

    explicit Desk(int l = 4, int m = 2, std::vector<fara::SpecialAction> specials = {})
        : freqs(10e9, 10e6, l),
          radar(freqs, m),
          jam_set(radar, std::move(specials)),
          powers(fara::compute_received_powers(fara::LinkBudgetParams{}, freqs)),
          cost(fara::build_cost_matrix(radar, jam_set, powers,
                                       fara::LinkBudgetParams{}.sinr_threshold)) {}

    fara::TrialConfig trial(fara::Algorithm algo, std::int64_t pulses,
                            int ome_depth = 3) const {
        fara::TrialConfig tc;
        tc.radar = &radar;
        tc.jammer_set = &jam_set;
        tc.cost = &cost;
        tc.algorithm = algo;
        tc.pulses = pulses;
        tc.opponent_model.depth = ome_depth;
        tc.opponent_model.feature = fara::FeatureMode::FrequencyHistogram;
        tc.history_depth = ome_depth > 0 ? std::max(3, ome_depth) : 3;
        return tc;
    }
};

// Fixed stationary strategy: normalized unit-exponential draws from a
// documented stream, the same recipe the shipped configs use.
inline fara::Strategy stationary_y(const fara::JammerActionSet& jam_set,
                                   std::uint64_t seed) {
    auto rng = std::mt19937_64(seed);
    std::vector<double> w(static_cast<std::size_t>(jam_set.size()));
    double sum = 0.0;
    for (auto& v : w) {
        v = -std::log(1.0 - fara::uniform_unit(rng));
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return fara::Strategy::from_weights(std::move(w));
}

}  // namespace desk
