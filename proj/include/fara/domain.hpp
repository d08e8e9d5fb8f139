#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fara/errors.hpp"
#include "fara/rng.hpp"

namespace fara {

using ActionIndex = std::int64_t;

inline constexpr double kSimplexTolerance = 1e-9;

// Evenly spaced carrier frequencies f_i = base + (i-1) * step, i in 1..count.
struct FrequencySet {
    double base_hz = 0.0;
    double step_hz = 0.0;
    int count = 0;

    FrequencySet() = default;
    FrequencySet(double base, double step, int n)
        : base_hz(base), step_hz(step), count(n) {
        if (count < 2) throw ConfigError("FrequencySet: count must be >= 2");
        if (step_hz <= 0.0) throw ConfigError("FrequencySet: step must be > 0");
        if (base_hz <= 0.0) throw ConfigError("FrequencySet: base frequency must be > 0");
    }

    // 1-based index, matching the usual f_1..f_L labelling.
    double frequency(int i) const { return base_hz + (i - 1) * step_hz; }
};

namespace detail {

inline std::int64_t checked_pow(int l, int m, std::int64_t cap) {
    std::int64_t v = 1;
    for (int i = 0; i < m; ++i) {
        if (v > cap / l) return cap + 1;  // overflow guard; caller reports
        v *= l;
    }
    return v;
}

}  // namespace detail

// The radar's action set F^M: every M-tuple of sub-carrier choices, indexed
// by mixed-radix enumeration with the first sub-pulse most significant.
struct RadarActionSet {
    FrequencySet frequencies;
    int subpulses = 0;
    std::int64_t size = 0;

    RadarActionSet() = default;
    RadarActionSet(FrequencySet f, int m) : frequencies(f), subpulses(m) {
        if (m < 1) throw ConfigError("RadarActionSet: subpulses must be >= 1");
        size = detail::checked_pow(f.count, m,
                                   std::numeric_limits<std::int64_t>::max() / 2);
    }

    // Decode an index into its tuple of 1-based frequency indices.
    std::vector<int> decode(ActionIndex a) const {
        if (a < 0 || a >= size)
            throw InvalidActionError("decode: action index " + std::to_string(a) +
                                     " outside [0, " + std::to_string(size) + ")");
        std::vector<int> tuple(subpulses);
        const int l = frequencies.count;
        for (int m = subpulses - 1; m >= 0; --m) {
            tuple[m] = static_cast<int>(a % l) + 1;
            a /= l;
        }
        return tuple;
    }

    ActionIndex encode(const std::vector<int>& tuple) const {
        if (static_cast<int>(tuple.size()) != subpulses)
            throw InvalidActionError("encode: tuple has " + std::to_string(tuple.size()) +
                                     " entries, expected " + std::to_string(subpulses));
        const int l = frequencies.count;
        ActionIndex a = 0;
        for (int v : tuple) {
            if (v < 1 || v > l)
                throw InvalidActionError("encode: frequency index " + std::to_string(v) +
                                         " outside {1.." + std::to_string(l) + "}");
            a = a * l + (v - 1);
        }
        return a;
    }
};

inline ActionIndex encode_action(const std::vector<int>& tuple, const RadarActionSet& set) {
    return set.encode(tuple);
}

inline std::vector<int> decode_action(ActionIndex a, const RadarActionSet& set) {
    return set.decode(a);
}

// A named jammer action that is not a frequency tuple. Its cost against every
// radar action is supplied directly as a column of the cost matrix.
struct SpecialAction {
    std::string name;
    std::vector<double> cost_column;  // length |A_R|, entries in [0,1]
};

// The jammer's action set: the same tuple enumeration as the radar on
// [0, L^M), followed by the special actions.
struct JammerActionSet {
    RadarActionSet frequency_actions;
    std::vector<SpecialAction> special_actions;

    JammerActionSet() = default;
    explicit JammerActionSet(RadarActionSet tuples, std::vector<SpecialAction> specials = {})
        : frequency_actions(std::move(tuples)), special_actions(std::move(specials)) {}

    std::int64_t size() const {
        return frequency_actions.size +
               static_cast<std::int64_t>(special_actions.size());
    }
    bool is_special(ActionIndex b) const {
        return b >= frequency_actions.size && b < size();
    }
    const SpecialAction& special(ActionIndex b) const {
        if (!is_special(b))
            throw InvalidActionError("special: index " + std::to_string(b) +
                                     " is not a special action");
        return special_actions[static_cast<std::size_t>(b - frequency_actions.size)];
    }
};

// A probability vector over an action set.
class Strategy {
public:
    Strategy() = default;

    static Strategy from_weights(std::vector<double> w) {
        Strategy s;
        s.w_ = std::move(w);
        s.validate();
        return s;
    }

    static Strategy uniform(std::int64_t n) {
        Strategy s;
        s.w_.assign(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
        return s;
    }

    static Strategy point_mass(std::int64_t n, ActionIndex a) {
        Strategy s;
        s.w_.assign(static_cast<std::size_t>(n), 0.0);
        s.w_.at(static_cast<std::size_t>(a)) = 1.0;
        return s;
    }

    const std::vector<double>& weights() const { return w_; }
    std::int64_t size() const { return static_cast<std::int64_t>(w_.size()); }
    double operator[](ActionIndex i) const { return w_[static_cast<std::size_t>(i)]; }

    void validate() const {
        if (w_.empty()) throw InvalidStrategyError("strategy is empty");
        double sum = 0.0;
        for (double v : w_) {
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidStrategyError("strategy has a negative or non-finite weight");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSimplexTolerance)
            throw InvalidStrategyError("strategy weights sum to " + std::to_string(sum) +
                                       ", outside 1 +/- 1e-9");
    }

    // Exact renormalization; used after multiplicative updates to absorb
    // floating-point drift.
    void renormalize() {
        double sum = 0.0;
        for (double v : w_) sum += v;
        if (!(sum > 0.0) || !std::isfinite(sum))
            throw InvalidStrategyError("strategy cannot be renormalized: weight sum " +
                                       std::to_string(sum));
        for (double& v : w_) v /= sum;
    }

private:
    std::vector<double> w_;
};

// Draw an action index from a strategy using inverse-CDF sampling on 53
// uniform bits. Identical seeds give identical draw sequences on any platform.
inline ActionIndex sample(const Strategy& strategy, std::mt19937_64& rng) {
    const auto& w = strategy.weights();
    double total = 0.0;
    for (double v : w) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidStrategyError("sample: strategy has a negative or non-finite weight");
        total += v;
    }
    if (!(total > 0.0))
        throw InvalidStrategyError("sample: strategy weights sum to zero");
    const double u = uniform_unit(rng) * total;
    double cum = 0.0;
    ActionIndex last_positive = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0.0) last_positive = static_cast<ActionIndex>(i);
        cum += w[i];
        if (u < cum) return static_cast<ActionIndex>(i);
    }
    return last_positive;  // rounding pushed u past the last positive bucket
}

// The DRFM record of recent pulses: (radar action, jammer action) pairs,
// most recent first, capped at `depth`.
class HistoryWindow {
public:
    struct Entry {
        ActionIndex radar;
        ActionIndex jammer;
    };

    explicit HistoryWindow(int depth) : depth_(depth) {
        if (depth < 1) throw ConfigError("HistoryWindow: depth must be >= 1");
    }

    int depth() const { return depth_; }
    int length() const { return static_cast<int>(entries_.size()); }
    bool full() const { return length() == depth_; }

    // entries()[0] is the most recent pulse.
    const std::vector<Entry>& entries() const { return entries_; }

    // The most recent `count` entries (or fewer if the window is shorter).
    std::vector<Entry> recent(int count) const {
        const int n = std::min(count, length());
        return std::vector<Entry>(entries_.begin(), entries_.begin() + n);
    }

    void push(ActionIndex radar, ActionIndex jammer) {
        entries_.insert(entries_.begin(), Entry{radar, jammer});
        if (static_cast<int>(entries_.size()) > depth_) entries_.resize(depth_);
    }

private:
    int depth_;
    std::vector<Entry> entries_;
};

}  // namespace fara
