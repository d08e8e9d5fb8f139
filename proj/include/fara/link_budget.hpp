#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fara/domain.hpp"
#include "fara/errors.hpp"

namespace fara {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Physical parameters of one radar/jammer engagement. SI units; gains and
// noise figure in dB (converted internally).
struct LinkBudgetParams {
    double radar_tx_power_w = 10e3;
    double jammer_tx_power_w = 1e3;
    double radar_antenna_gain_db = 30.0;
    double jammer_antenna_gain_db = 10.0;
    double target_rcs_m2 = 1.0;
    double distance_m = 100e3;
    double carrier_frequency_hz = 10e9;
    double subpulse_width_s = 3e-6;
    double noise_temperature_k = 290.0;
    double noise_figure_db = 3.0;
    double sinr_threshold = 0.01;
    bool flat_echo = false;  // ignore wavelength variation across F

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string("link budget: ") + name + " must be > 0");
        };
        positive(radar_tx_power_w, "radar_tx_power_w");
        positive(target_rcs_m2, "target_rcs_m2");
        positive(distance_m, "distance_m");
        positive(carrier_frequency_hz, "carrier_frequency_hz");
        positive(subpulse_width_s, "subpulse_width_s");
        positive(noise_temperature_k, "noise_temperature_k");
        positive(sinr_threshold, "sinr_threshold");
        if (jammer_tx_power_w < 0.0 || !std::isfinite(jammer_tx_power_w))
            throw ConfigError("link budget: jammer_tx_power_w must be >= 0");
        if (!std::isfinite(radar_antenna_gain_db) || !std::isfinite(jammer_antenna_gain_db) ||
            !std::isfinite(noise_figure_db))
            throw ConfigError("link budget: gains and noise figure must be finite");
    }
};

// Receiver-side powers. Echo power is two-way (radar range equation), jam
// power one-way, noise kTBF with B = 1/T_c.
struct ReceivedPowers {
    std::vector<double> echo_power_w;  // one entry per frequency in F
    double jam_power_w = 0.0;
    double noise_power_w = 0.0;

    void validate() const {
        if (echo_power_w.empty()) throw ConfigError("received powers: no echo entries");
        for (double p : echo_power_w)
            if (!(p > 0.0)) throw ConfigError("received powers: echo power must be > 0");
        if (!(noise_power_w > 0.0)) throw ConfigError("received powers: noise power must be > 0");
        if (jam_power_w < 0.0) throw ConfigError("received powers: jam power must be >= 0");
    }
};

inline ReceivedPowers compute_received_powers(const LinkBudgetParams& p,
                                              const FrequencySet& freqs) {
    p.validate();
    const double g = db_to_linear(p.radar_antenna_gain_db);
    const double gj = db_to_linear(p.jammer_antenna_gain_db);
    const double nf = db_to_linear(p.noise_figure_db);
    const double four_pi = 4.0 * M_PI;
    const double r2 = p.distance_m * p.distance_m;
    const double r4 = r2 * r2;

    ReceivedPowers out;
    out.echo_power_w.resize(static_cast<std::size_t>(freqs.count));
    for (int i = 1; i <= freqs.count; ++i) {
        const double f = p.flat_echo ? p.carrier_frequency_hz : freqs.frequency(i);
        const double lambda = kSpeedOfLight / f;
        out.echo_power_w[static_cast<std::size_t>(i - 1)] =
            p.radar_tx_power_w * g * g * lambda * lambda * p.target_rcs_m2 /
            (four_pi * four_pi * four_pi * r4);
    }
    const double lambda_c = kSpeedOfLight / p.carrier_frequency_hz;
    out.jam_power_w = p.jammer_tx_power_w * gj * g * lambda_c * lambda_c /
                      (four_pi * four_pi * r2);
    const double bandwidth = 1.0 / p.subpulse_width_s;
    out.noise_power_w = kBoltzmann * p.noise_temperature_k * bandwidth * nf;
    out.validate();
    return out;
}

// Per-sub-pulse signal-to-interference-plus-noise ratio.
inline double subpulse_sinr(double echo_power_w, double noise_power_w,
                            double jam_power_w, bool jammed) {
    return echo_power_w / (noise_power_w + (jammed ? jam_power_w : 0.0));
}

// Normalized cost of radar action `a` against jammer action `b`:
//   cost = (c - mean_m min(SINR_m, c)) / c  in [0, 1].
// A frequency-tuple jammer action jams sub-pulse m iff its m-th frequency
// equals a's m-th frequency; a special action's column value is used directly.
inline double action_cost(ActionIndex a, ActionIndex b,
                          const RadarActionSet& radar,
                          const JammerActionSet& jammer,
                          const ReceivedPowers& powers, double c) {
    if (c <= 0.0) throw ConfigError("action_cost: threshold must be > 0");
    if (a < 0 || a >= radar.size)
        throw InvalidActionError("action_cost: radar action " + std::to_string(a) +
                                 " outside [0, " + std::to_string(radar.size) + ")");
    if (b < 0 || b >= jammer.size())
        throw InvalidActionError("action_cost: jammer action " + std::to_string(b) +
                                 " outside [0, " + std::to_string(jammer.size()) + ")");
    if (jammer.is_special(b)) {
        const SpecialAction& s = jammer.special(b);
        if (static_cast<std::int64_t>(s.cost_column.size()) != radar.size)
            throw ConfigError("special action '" + s.name + "' has no cost column entry for every radar action");
        return s.cost_column[static_cast<std::size_t>(a)];
    }
    const std::vector<int> ta = radar.decode(a);
    const std::vector<int> tb = jammer.frequency_actions.decode(b);
    double acc = 0.0;
    for (int m = 0; m < radar.subpulses; ++m) {
        const double echo = powers.echo_power_w[static_cast<std::size_t>(ta[static_cast<std::size_t>(m)] - 1)];
        const bool jammed = ta[static_cast<std::size_t>(m)] == tb[static_cast<std::size_t>(m)];
        const double sinr = subpulse_sinr(echo, powers.noise_power_w, powers.jam_power_w, jammed);
        acc += std::min(sinr, c);
    }
    return (c - acc / radar.subpulses) / c;
}

// The full |A_R| x |A_J| game matrix, row-major.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::int64_t rows, std::int64_t cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows * cols), 0.0) {}

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    double at(ActionIndex a, ActionIndex b) const {
        return data_[static_cast<std::size_t>(a * cols_ + b)];
    }
    double& at(ActionIndex a, ActionIndex b) {
        return data_[static_cast<std::size_t>(a * cols_ + b)];
    }

    // Column b as a dense vector of length rows().
    std::vector<double> column(ActionIndex b) const {
        if (b < 0 || b >= cols_)
            throw InvalidActionError("CostMatrix::column: index " + std::to_string(b) +
                                     " outside [0, " + std::to_string(cols_) + ")");
        std::vector<double> col(static_cast<std::size_t>(rows_));
        for (std::int64_t a = 0; a < rows_; ++a) col[static_cast<std::size_t>(a)] = at(a, b);
        return col;
    }

    // out += weight * column(b); the hot-loop accumulation primitive.
    void add_column(ActionIndex b, double weight, std::vector<double>& out) const {
        const double* col = data_.data() + static_cast<std::size_t>(b);
        for (std::int64_t a = 0; a < rows_; ++a)
            out[static_cast<std::size_t>(a)] += weight * col[static_cast<std::size_t>(a * cols_)];
    }

    void validate() const {
        for (double v : data_)
            if (!(v >= 0.0 && v <= 1.0))
                throw ConfigError("cost matrix entry outside [0, 1]");
    }

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<double> data_;
};

inline constexpr std::int64_t kDefaultActionSpaceCap = 4096;

inline CostMatrix build_cost_matrix(const RadarActionSet& radar,
                                    const JammerActionSet& jammer,
                                    const ReceivedPowers& powers, double c,
                                    std::int64_t size_cap = kDefaultActionSpaceCap) {
    if (radar.size > size_cap)
        throw ConfigError("action space too large: L=" + std::to_string(radar.frequencies.count) +
                          ", M=" + std::to_string(radar.subpulses) + " gives L^M=" +
                          std::to_string(radar.size) + " > cap " + std::to_string(size_cap));
    CostMatrix u(radar.size, jammer.size());
    for (ActionIndex a = 0; a < radar.size; ++a)
        for (ActionIndex b = 0; b < jammer.size(); ++b)
            u.at(a, b) = action_cost(a, b, radar, jammer, powers, c);
    u.validate();
    return u;
}

}  // namespace fara
