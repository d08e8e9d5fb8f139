#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fara/domain.hpp"
#include "fara/errors.hpp"
#include "fara/estimators.hpp"
#include "fara/jammer.hpp"
#include "fara/link_budget.hpp"
#include "fara/omd.hpp"
#include "fara/rng.hpp"
#include "fara/stats.hpp"

namespace fara {

struct PulseRecord {
    std::int64_t pulse = 0;  // 1-based
    ActionIndex radar_action = 0;
    ActionIndex jammer_action = 0;
    double realized_cost = 0.0;
    double expected_cost = 0.0;
    double min_true_loss = 0.0;  // per-pulse comparator summand of ell_n
};

// Per-pulse cumulative curves of one trial. Index n-1 holds the value after
// pulse n.
struct RegretLedger {
    std::vector<double> cumulative_expected_cost;
    std::vector<double> static_comparator_cost;     // min_a sum_{t<=n} ell_t(a)
    std::vector<double> universal_comparator_cost;  // sum_{t<=n} min_a ell_t(a)
    std::vector<double> expected_cost_per_pulse;

    std::int64_t pulses() const {
        return static_cast<std::int64_t>(cumulative_expected_cost.size());
    }
};

inline double static_regret(const RegretLedger& ledger, std::int64_t n) {
    if (n < 1 || n > ledger.pulses())
        throw Error("static_regret: pulse " + std::to_string(n) + " out of range");
    const auto i = static_cast<std::size_t>(n - 1);
    return ledger.cumulative_expected_cost[i] - ledger.static_comparator_cost[i];
}

inline double universal_regret(const RegretLedger& ledger, std::int64_t n) {
    if (n < 1 || n > ledger.pulses())
        throw Error("universal_regret: pulse " + std::to_string(n) + " out of range");
    const auto i = static_cast<std::size_t>(n - 1);
    return ledger.cumulative_expected_cost[i] - ledger.universal_comparator_cost[i];
}

struct OpponentModelConfig {
    int depth = 3;
    FeatureMode feature = FeatureMode::FrequencyHistogram;
};

// Everything a single trial needs. The referenced sets and matrix are shared
// read-only across trials.
struct TrialConfig {
    const RadarActionSet* radar = nullptr;
    const JammerActionSet* jammer_set = nullptr;
    const CostMatrix* cost = nullptr;
    Algorithm algorithm = Algorithm::Iwe;
    double learning_rate = 0.0;  // <= 0 selects default_learning_rate
    std::int64_t pulses = 0;
    OpponentModelConfig opponent_model;
    double iwe_uniform_mix = 0.0;  // epsilon-mix of the sampling distribution
    int history_depth = 3;         // DRFM window depth

    double resolved_learning_rate() const {
        return learning_rate > 0.0
                   ? learning_rate
                   : default_learning_rate(algorithm, pulses, radar->size);
    }
};

struct TrialResult {
    RegretLedger ledger;
    std::vector<PulseRecord> records;  // populated when keep_records is set
};

namespace detail {

// U * y over the support of y.
inline std::vector<double> true_loss_vector(const CostMatrix& u, const Strategy& y) {
    std::vector<double> ell(static_cast<std::size_t>(u.rows()), 0.0);
    const auto& w = y.weights();
    for (std::size_t b = 0; b < w.size(); ++b)
        if (w[b] > 0.0) u.add_column(static_cast<ActionIndex>(b), w[b], ell);
    return ell;
}

// Opponent-modeling strategy head. The played strategy at pulse n is the
// entropic-regularized best response to the model's prediction for the
// current history key,
//     x_n(h) = softmax(-eta * (n-1) * U * yhat_{n-1}(h)),
// i.e. mirror descent under negative entropy applied to the model-estimated
// cumulative loss: the closed-form multiplicative update over the telescoped
// estimate sequence ell_t = U*[t*yhat_t(h) - (t-1)*yhat_{t-1}(h)]. With a
// depth-0 model the telescoped sum collapses to sum_t U[:, b_t], which is the
// action-modeling update exactly. U * counts is cached incrementally per key
// so each pulse costs O(|A_R|).
class OmeHead {
public:
    OmeHead(const TrialConfig& cfg)
        : model_(cfg.opponent_model.depth, cfg.opponent_model.feature, *cfg.radar,
                 cfg.jammer_set->size()),
          u_(cfg.cost), eta_(cfg.resolved_learning_rate()) {
        uniform_pred_.assign(static_cast<std::size_t>(u_->rows()), 0.0);
        const double p = 1.0 / static_cast<double>(u_->cols());
        for (ActionIndex b = 0; b < u_->cols(); ++b)
            u_->add_column(b, p, uniform_pred_);
    }

    Strategy strategy(const HistoryWindow& window, std::int64_t pulse) {
        const std::string key = model_.key(window);
        const Cell* cell = nullptr;
        if (auto it = cache_.find(key); it != cache_.end() && it->second.total > 0)
            cell = &it->second;
        const double scale = -eta_ * static_cast<double>(pulse - 1);
        const std::size_t k = uniform_pred_.size();
        std::vector<double> logits(k);
        if (cell == nullptr) {
            for (std::size_t i = 0; i < k; ++i) logits[i] = scale * uniform_pred_[i];
        } else {
            const double inv = 1.0 / static_cast<double>(cell->total);
            for (std::size_t i = 0; i < k; ++i)
                logits[i] = scale * cell->ucol_sum[i] * inv;
        }
        const double mx = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            logits[i] = std::exp(logits[i] - mx);
            sum += logits[i];
        }
        for (std::size_t i = 0; i < k; ++i) logits[i] /= sum;
        return Strategy::from_weights(std::move(logits));
    }

    void observe(const HistoryWindow& window_before, ActionIndex b) {
        model_.record(window_before, b);
        Cell& cell = cache_[model_.key(window_before)];
        if (cell.ucol_sum.empty())
            cell.ucol_sum.assign(static_cast<std::size_t>(u_->rows()), 0.0);
        u_->add_column(b, 1.0, cell.ucol_sum);
        ++cell.total;
    }

    const OpponentModel& model() const { return model_; }

private:
    struct Cell {
        std::vector<double> ucol_sum;  // U * counts
        std::uint64_t total = 0;
    };
    OpponentModel model_;
    const CostMatrix* u_;
    double eta_;
    std::vector<double> uniform_pred_;  // U * uniform
    std::unordered_map<std::string, Cell> cache_;
};

}  // namespace detail

// Play one trial of the pulse-by-pulse protocol: the jammer commits b_n from
// its history rule, the radar draws a_n from its current strategy, both sides
// observe, and the radar's learner updates. Deterministic given (config, seed).
inline TrialResult run_trial(const TrialConfig& cfg, const Jammer& jammer,
                             std::uint64_t base_seed, std::uint64_t trial_index = 0,
                             bool keep_records = false) {
    if (cfg.pulses < 1) throw ConfigError("run_trial: pulses must be >= 1");
    const auto n_pulses = cfg.pulses;
    const auto& u = *cfg.cost;
    auto radar_rng = make_stream(base_seed, trial_index, StreamRole::Radar);
    auto jammer_rng = make_stream(base_seed, trial_index, StreamRole::Jammer);

    HistoryWindow window(cfg.history_depth);
    const double eta = cfg.resolved_learning_rate();

    OmdState omd(Strategy::uniform(cfg.radar->size), eta, 0);
    std::optional<detail::OmeHead> ome;
    if (cfg.algorithm == Algorithm::Ome) ome.emplace(cfg);

    const bool stationary = std::holds_alternative<StationaryJammer>(jammer);
    std::vector<double> stationary_ell;
    if (stationary)
        stationary_ell = detail::true_loss_vector(
            u, std::get<StationaryJammer>(jammer).strategy);

    TrialResult out;
    auto& ledger = out.ledger;
    ledger.cumulative_expected_cost.resize(static_cast<std::size_t>(n_pulses));
    ledger.static_comparator_cost.resize(static_cast<std::size_t>(n_pulses));
    ledger.universal_comparator_cost.resize(static_cast<std::size_t>(n_pulses));
    ledger.expected_cost_per_pulse.resize(static_cast<std::size_t>(n_pulses));
    if (keep_records) out.records.reserve(static_cast<std::size_t>(n_pulses));

    std::vector<double> cumulative_loss(static_cast<std::size_t>(cfg.radar->size), 0.0);
    double cum_expected = 0.0;
    double cum_min_loss = 0.0;

    for (std::int64_t n = 1; n <= n_pulses; ++n) {
        const Strategy y = jammer_strategy(jammer, window, *cfg.jammer_set, *cfg.radar);
        const ActionIndex b = sample(y, jammer_rng);

        Strategy x = cfg.algorithm == Algorithm::Ome ? ome->strategy(window, n)
                                                     : omd.strategy;
        if (cfg.algorithm == Algorithm::Iwe && cfg.iwe_uniform_mix > 0.0) {
            const double eps = cfg.iwe_uniform_mix;
            std::vector<double> mixed = x.weights();
            const double unif = eps / static_cast<double>(mixed.size());
            for (double& v : mixed) v = (1.0 - eps) * v + unif;
            x = Strategy::from_weights(std::move(mixed));
        }
        const ActionIndex a = sample(x, radar_rng);
        const double realized = u.at(a, b);

        const std::vector<double>& ell =
            stationary ? stationary_ell : detail::true_loss_vector(u, y);
        double expected = 0.0;
        double min_loss = ell[0];
        for (std::size_t i = 0; i < ell.size(); ++i) {
            expected += ell[i] * x[static_cast<ActionIndex>(i)];
            cumulative_loss[i] += ell[i];
            min_loss = std::min(min_loss, ell[i]);
        }
        if (!std::isfinite(expected) || !(realized >= 0.0 && realized <= 1.0))
            throw Error("run_trial: non-finite or out-of-range cost at pulse " +
                        std::to_string(n));

        cum_expected += expected;
        cum_min_loss += min_loss;
        const std::size_t idx = static_cast<std::size_t>(n - 1);
        ledger.cumulative_expected_cost[idx] = cum_expected;
        ledger.universal_comparator_cost[idx] = cum_min_loss;
        ledger.static_comparator_cost[idx] =
            *std::min_element(cumulative_loss.begin(), cumulative_loss.end());
        ledger.expected_cost_per_pulse[idx] = expected;
        if (keep_records)
            out.records.push_back(PulseRecord{n, a, b, realized, expected, min_loss});

        switch (cfg.algorithm) {
            case Algorithm::Iwe:
                omd = omd_step(omd, iwe_gradient(realized, a, x).values);
                break;
            case Algorithm::Ame:
                omd = omd_step(omd, ame_gradient(b, u).values);
                break;
            case Algorithm::Ome:
                ome->observe(window, b);
                break;
        }
        window.push(a, b);
    }
    return out;
}

// Per-pulse aggregate over trials: means and two-sided normal confidence
// bands for static regret, universal regret and normalized SINR (1 - cost).
struct AggregateResult {
    std::int64_t pulses = 0;
    std::int64_t trials = 0;
    double confidence = 0.95;
    std::vector<double> static_mean, static_lo, static_hi;
    std::vector<double> universal_mean, universal_lo, universal_hi;
    std::vector<double> sinr_mean, sinr_lo, sinr_hi;
};

// Streaming reducer; feed ledgers strictly in trial order.
class Aggregator {
public:
    explicit Aggregator(std::int64_t pulses) : pulses_(pulses) {
        static_.resize(static_cast<std::size_t>(pulses));
        universal_.resize(static_cast<std::size_t>(pulses));
        sinr_.resize(static_cast<std::size_t>(pulses));
    }

    void add(const RegretLedger& ledger) {
        if (ledger.pulses() != pulses_)
            throw ConfigError("aggregate: trial has " + std::to_string(ledger.pulses()) +
                              " pulses, expected " + std::to_string(pulses_));
        for (std::int64_t n = 1; n <= pulses_; ++n) {
            const auto i = static_cast<std::size_t>(n - 1);
            static_[i].add(static_regret(ledger, n));
            universal_[i].add(universal_regret(ledger, n));
            sinr_[i].add(1.0 - ledger.expected_cost_per_pulse[i]);
        }
        ++trials_;
    }

    AggregateResult finalize(double confidence) const {
        if (trials_ < 2) throw ConfigError("aggregate: need at least 2 trials");
        const double z = two_sided_z(confidence);
        AggregateResult r;
        r.pulses = pulses_;
        r.trials = trials_;
        r.confidence = confidence;
        auto fill = [&](const std::vector<MeanVarAccumulator>& acc, std::vector<double>& mean,
                        std::vector<double>& lo, std::vector<double>& hi) {
            const std::size_t n = acc.size();
            mean.resize(n);
            lo.resize(n);
            hi.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                mean[i] = acc[i].mean();
                const double h = acc[i].half_width(z);
                lo[i] = mean[i] - h;
                hi[i] = mean[i] + h;
            }
        };
        fill(static_, r.static_mean, r.static_lo, r.static_hi);
        fill(universal_, r.universal_mean, r.universal_lo, r.universal_hi);
        fill(sinr_, r.sinr_mean, r.sinr_lo, r.sinr_hi);
        return r;
    }

private:
    std::int64_t pulses_;
    std::int64_t trials_ = 0;
    std::vector<MeanVarAccumulator> static_, universal_, sinr_;
};

inline AggregateResult aggregate(const std::vector<RegretLedger>& trials,
                                 double confidence) {
    if (trials.size() < 2) throw ConfigError("aggregate: need at least 2 trials");
    Aggregator acc(trials.front().pulses());
    for (const auto& t : trials) acc.add(t);
    return acc.finalize(confidence);
}

// Run `n_trials` independent trials, possibly in parallel. Trials are chunked
// into contiguous index ranges; reduction always walks trial 0, 1, 2, ... so
// the result does not depend on the thread count.
inline AggregateResult run_trials(const TrialConfig& cfg, const Jammer& jammer,
                                  std::uint64_t base_seed, std::int64_t n_trials,
                                  double confidence, int threads = 0) {
    if (n_trials < 2) throw ConfigError("run_trials: need at least 2 trials");
    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<std::int64_t>(threads, n_trials));

    const std::int64_t chunk = (n_trials + threads - 1) / threads;
    std::vector<std::future<std::vector<RegretLedger>>> futures;
    for (std::int64_t begin = 0; begin < n_trials; begin += chunk) {
        const std::int64_t end = std::min(begin + chunk, n_trials);
        futures.push_back(std::async(std::launch::async, [&, begin, end] {
            std::vector<RegretLedger> ledgers;
            ledgers.reserve(static_cast<std::size_t>(end - begin));
            for (std::int64_t t = begin; t < end; ++t)
                ledgers.push_back(run_trial(cfg, jammer, base_seed,
                                            static_cast<std::uint64_t>(t), false)
                                      .ledger);
            return ledgers;
        }));
    }
    Aggregator acc(cfg.pulses);
    for (auto& f : futures)
        for (const auto& ledger : f.get()) acc.add(ledger);
    return acc.finalize(confidence);
}

}  // namespace fara
