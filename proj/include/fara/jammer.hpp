#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "fara/domain.hpp"
#include "fara/errors.hpp"

namespace fara {

// Fixed mixed strategy y, independent of history.
struct StationaryJammer {
    Strategy strategy;
};

// Reactive rule over the recent window: put top_weight on spot-jamming the
// most common radar sub-pulse frequency of the last `depth` pulses and
// second_weight on the second most common. Ties rank by lower frequency
// index. Until the window holds `depth` pulses the rule is uniform.
struct HistoryRuleJammer {
    int depth = 3;
    double top_weight = 0.7;
    double second_weight = 0.3;

    void validate() const {
        if (depth < 1) throw ConfigError("history-rule jammer: depth must be >= 1");
        if (!(top_weight >= 0.0) || !(second_weight >= 0.0) ||
            std::abs(top_weight + second_weight - 1.0) > kSimplexTolerance)
            throw ConfigError("history-rule jammer: weights must be >= 0 and sum to 1");
    }
};

using Jammer = std::variant<StationaryJammer, HistoryRuleJammer>;

// Frequencies ranked by (occurrence count in the window, descending; index,
// ascending). Counts run over every sub-pulse of every radar action recorded;
// jammer actions in the window are ignored.
inline std::pair<int, int> top_two_frequencies(const HistoryWindow& history, int depth,
                                               const RadarActionSet& radar) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(radar.frequencies.count), 0);
    for (const auto& e : history.recent(depth))
        for (int f : radar.decode(e.radar)) ++counts[static_cast<std::size_t>(f - 1)];
    std::vector<int> order(static_cast<std::size_t>(radar.frequencies.count));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ca = counts[static_cast<std::size_t>(a - 1)];
        const auto cb = counts[static_cast<std::size_t>(b - 1)];
        return ca != cb ? ca > cb : a < b;
    });
    return {order[0], order[1]};
}

// Full-pulse spot jamming: every sub-pulse at the same frequency.
inline ActionIndex spot_jam_action(int frequency_index, const RadarActionSet& radar) {
    return radar.encode(std::vector<int>(static_cast<std::size_t>(radar.subpulses),
                                         frequency_index));
}

// The jammer's mixed strategy y_n for the current pulse. Pure in
// (jammer, history); never sees the radar's current-pulse action.
inline Strategy jammer_strategy(const Jammer& jammer, const HistoryWindow& history,
                                const JammerActionSet& jammer_set,
                                const RadarActionSet& radar) {
    if (const auto* s = std::get_if<StationaryJammer>(&jammer)) {
        return s->strategy;
    }
    const auto& rule = std::get<HistoryRuleJammer>(jammer);
    if (history.length() < rule.depth) return Strategy::uniform(jammer_set.size());
    const auto [f1, f2] = top_two_frequencies(history, rule.depth, radar);
    std::vector<double> w(static_cast<std::size_t>(jammer_set.size()), 0.0);
    w[static_cast<std::size_t>(spot_jam_action(f1, radar))] = rule.top_weight;
    w[static_cast<std::size_t>(spot_jam_action(f2, radar))] = rule.second_weight;
    return Strategy::from_weights(std::move(w));
}

inline ActionIndex jammer_act(const Jammer& jammer, const HistoryWindow& history,
                              const JammerActionSet& jammer_set,
                              const RadarActionSet& radar, std::mt19937_64& rng) {
    return sample(jammer_strategy(jammer, history, jammer_set, radar), rng);
}

}  // namespace fara
