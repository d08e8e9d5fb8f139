#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fara/domain.hpp"
#include "fara/errors.hpp"

namespace fara {

enum class Algorithm { Iwe, Ame, Ome };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Iwe: return "iwe";
        case Algorithm::Ame: return "ame";
        case Algorithm::Ome: return "ome";
    }
    return "?";
}

// Mirror-descent state under the negative-entropy regularizer.
struct OmdState {
    Strategy strategy;
    double learning_rate = 0.0;
    std::int64_t pulse_index = 0;

    OmdState() = default;
    OmdState(Strategy x, double eta, std::int64_t n = 0)
        : strategy(std::move(x)), learning_rate(eta), pulse_index(n) {
        strategy.validate();
        if (!(learning_rate > 0.0))
            throw ConfigError("OmdState: learning rate must be > 0");
    }
};

// One multiplicative-weights step: x'_i proportional to x_i * exp(-eta * g_i),
// the closed form of the entropic Bregman update followed by simplex
// projection. Computed in the log domain with max subtraction so eta * g
// entries up to ~700 cannot underflow the normalizer.
inline OmdState omd_step(const OmdState& state, const std::vector<double>& gradient) {
    const auto& x = state.strategy.weights();
    if (gradient.size() != x.size())
        throw InvalidGradientError("omd_step: gradient length " + std::to_string(gradient.size()) +
                                   " != strategy length " + std::to_string(x.size()));
    for (double g : gradient)
        if (!std::isfinite(g))
            throw InvalidGradientError("omd_step: gradient has a non-finite entry");

    std::vector<double> logw(x.size());
    double maxlog = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
        logw[i] = std::log(x[i]) - state.learning_rate * gradient[i];
        maxlog = std::max(maxlog, logw[i]);
    }
    if (!std::isfinite(maxlog))
        throw UnderflowError("omd_step: all weights underflowed at pulse " +
                             std::to_string(state.pulse_index));
    double sum = 0.0;
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        w[i] = std::exp(logw[i] - maxlog);
        sum += w[i];
    }
    if (!(sum > 0.0))
        throw UnderflowError("omd_step: zero normalizer at pulse " +
                             std::to_string(state.pulse_index));
    for (double& v : w) v /= sum;

    OmdState next;
    next.strategy = Strategy::from_weights(std::move(w));
    next.learning_rate = state.learning_rate;
    next.pulse_index = state.pulse_index + 1;
    return next;
}

// Theory-standard constant step sizes for a known horizon.
//   IWE:      sqrt(ln|A_R| / (N * |A_R|))   (bandit-information rate)
//   AME/OME:  sqrt(2 ln|A_R| / N)           (full-information rate)
inline double default_learning_rate(Algorithm algo, std::int64_t horizon,
                                    std::int64_t n_actions) {
    if (horizon < 1) throw ConfigError("default_learning_rate: horizon must be >= 1");
    if (n_actions < 2) throw ConfigError("default_learning_rate: need at least 2 actions");
    const double logk = std::log(static_cast<double>(n_actions));
    const double n = static_cast<double>(horizon);
    if (algo == Algorithm::Iwe)
        return std::sqrt(logk / (n * static_cast<double>(n_actions)));
    return std::sqrt(2.0 * logk / n);
}

}  // namespace fara
