#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "fara/domain.hpp"
#include "fara/errors.hpp"
#include "fara/link_budget.hpp"
#include "fara/omd.hpp"

namespace fara {

// A loss-vector estimate over the radar action set.
struct GradientEstimate {
    std::vector<double> values;
    Algorithm estimator_tag = Algorithm::Iwe;
};

// Importance-weighted estimate from bandit feedback: the observed cost of the
// chosen action divided by its probability, zero elsewhere.
inline GradientEstimate iwe_gradient(double observed_cost, ActionIndex chosen,
                                     const Strategy& strategy) {
    const double p = strategy[chosen];
    if (!(p > 0.0))
        throw InvalidStrategyError("iwe_gradient: chosen action has probability zero");
    GradientEstimate g;
    g.estimator_tag = Algorithm::Iwe;
    g.values.assign(static_cast<std::size_t>(strategy.size()), 0.0);
    g.values[static_cast<std::size_t>(chosen)] = observed_cost / p;
    return g;
}

// Action-modeling estimate: the cost-matrix column of the observed jammer
// action. Unbiased for U * y when b ~ y.
inline GradientEstimate ame_gradient(ActionIndex observed_jammer_action,
                                     const CostMatrix& u) {
    GradientEstimate g;
    g.estimator_tag = Algorithm::Ame;
    g.values = u.column(observed_jammer_action);
    return g;
}

enum class FeatureMode { FullHistory, FrequencyHistogram };

// Maximum-likelihood model of the jammer's history-conditional decision rule.
// Counts of observed jammer actions, keyed by a feature of the preceding
// history window:
//   FullHistory:        the exact (radar, jammer) pair sequence
//   FrequencyHistogram: the histogram of radar sub-pulse frequencies
// Keys always encode the window length, so partially filled windows (the
// first `depth` pulses of a trial) never alias a full window.
// depth 0 keys everything to a single unconditional distribution.
class OpponentModel {
public:
    OpponentModel() = default;
    OpponentModel(int history_depth, FeatureMode mode, const RadarActionSet& radar,
                  std::int64_t n_jammer_actions)
        : depth_(history_depth), mode_(mode), n_freq_(radar.frequencies.count),
          subpulses_(radar.subpulses), radar_(&radar),
          n_jammer_actions_(n_jammer_actions) {
        if (history_depth < 0)
            throw ConfigError("OpponentModel: history depth must be >= 0");
    }

    int history_depth() const { return depth_; }
    FeatureMode feature_mode() const { return mode_; }
    std::int64_t jammer_actions() const { return n_jammer_actions_; }

    std::string key(const HistoryWindow& history) const {
        const auto recent = history.recent(depth_);
        std::string k;
        append_u32(k, static_cast<std::uint32_t>(recent.size()));
        if (mode_ == FeatureMode::FullHistory) {
            for (const auto& e : recent) {
                append_u32(k, static_cast<std::uint32_t>(e.radar));
                append_u32(k, static_cast<std::uint32_t>(e.jammer));
            }
        } else {
            std::vector<std::uint32_t> counts(static_cast<std::size_t>(n_freq_), 0);
            for (const auto& e : recent)
                for (int f : radar_->decode(e.radar))
                    ++counts[static_cast<std::size_t>(f - 1)];
            for (std::uint32_t c : counts) append_u32(k, c);
        }
        return k;
    }

    void record(const HistoryWindow& history_before, ActionIndex jammer_action) {
        if (jammer_action < 0 || jammer_action >= n_jammer_actions_)
            throw InvalidActionError("OpponentModel::record: jammer action " +
                                     std::to_string(jammer_action) + " out of range");
        auto& counts = counts_[key(history_before)];
        if (counts.empty()) counts.assign(static_cast<std::size_t>(n_jammer_actions_), 0);
        ++counts[static_cast<std::size_t>(jammer_action)];
    }

    // Empirical action frequencies for the window's key; uniform when the key
    // has never been observed.
    Strategy predict(const HistoryWindow& history) const {
        const auto it = counts_.find(key(history));
        if (it == counts_.end()) return Strategy::uniform(n_jammer_actions_);
        std::uint64_t total = 0;
        for (std::uint64_t c : it->second) total += c;
        if (total == 0) return Strategy::uniform(n_jammer_actions_);
        std::vector<double> w(it->second.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = static_cast<double>(it->second[i]) / static_cast<double>(total);
        return Strategy::from_weights(std::move(w));
    }

    const std::unordered_map<std::string, std::vector<std::uint64_t>>& counts() const {
        return counts_;
    }

private:
    static void append_u32(std::string& s, std::uint32_t v) {
        char buf[4];
        std::memcpy(buf, &v, 4);
        s.append(buf, 4);
    }

    int depth_ = 0;
    FeatureMode mode_ = FeatureMode::FrequencyHistogram;
    int n_freq_ = 0;
    int subpulses_ = 0;
    const RadarActionSet* radar_ = nullptr;
    std::int64_t n_jammer_actions_ = 0;
    std::unordered_map<std::string, std::vector<std::uint64_t>> counts_;
};

// Pure form of the model update: returns a copy with one more observation.
inline OpponentModel observe(const OpponentModel& model,
                             const HistoryWindow& history_before,
                             ActionIndex jammer_action) {
    OpponentModel next = model;
    next.record(history_before, jammer_action);
    return next;
}

inline Strategy predict(const OpponentModel& model, const HistoryWindow& history) {
    return model.predict(history);
}

// Opponent-modeling estimate: U * y_hat for the current history's prediction.
inline GradientEstimate ome_gradient(const OpponentModel& model,
                                     const HistoryWindow& history,
                                     const CostMatrix& u) {
    const Strategy yhat = model.predict(history);
    GradientEstimate g;
    g.estimator_tag = Algorithm::Ome;
    g.values.assign(static_cast<std::size_t>(u.rows()), 0.0);
    const auto& w = yhat.weights();
    for (std::size_t b = 0; b < w.size(); ++b)
        if (w[b] > 0.0) u.add_column(static_cast<ActionIndex>(b), w[b], g.values);
    return g;
}

}  // namespace fara
