#pragma once

#include <cmath>
#include <cstdint>

#include "fara/errors.hpp"

namespace fara {

// Two-sided standard-normal quantile: z such that P(|Z| <= z) = level.
// Acklam's rational approximation refined with one Halley step against erfc,
// accurate to near machine precision over (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw ConfigError("normal_quantile: p must be in (0, 1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement: e = Phi(x) - p.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

inline double two_sided_z(double confidence_level) {
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw ConfigError("confidence level must be in (0, 1)");
    return normal_quantile(0.5 + confidence_level / 2.0);
}

// Running per-pulse mean/variance accumulator over trials (Welford), reduced
// strictly in trial order for bit-reproducibility. Identical inputs yield an
// exactly zero variance.
struct MeanVarAccumulator {
    std::int64_t count = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;

    void add(double v) {
        ++count;
        const double delta = v - mean_;
        mean_ += delta / static_cast<double>(count);
        m2_ += delta * (v - mean_);
    }
    double mean() const { return mean_; }
    // Sample standard deviation (Bessel).
    double stddev() const {
        if (count < 2) return 0.0;
        const double var = m2_ / static_cast<double>(count - 1);
        return var > 0.0 ? std::sqrt(var) : 0.0;
    }
    double half_width(double z) const {
        return count > 0 ? z * stddev() / std::sqrt(static_cast<double>(count)) : 0.0;
    }
};

}  // namespace fara
