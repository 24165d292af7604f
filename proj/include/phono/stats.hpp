#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

// The five principal interval statistics. Kurtosis is the population
// (non-excess) Pearson ratio m4/m2^2, with a 0 sentinel for near-constant
// intervals where the ratio is undefined.
struct Stats5 {
    double rms = 0.0;
    double variance = 0.0;
    double energy = 0.0;
    double kurtosis = 0.0;
    double dynamic_interval = 0.0;

    static constexpr std::size_t kCount = 5;
    std::array<double, kCount> as_array() const {
        return {rms, variance, energy, kurtosis, dynamic_interval};
    }
};

inline Stats5 stats5(std::span<const double> x) {
    if (x.empty()) throw EmptyInterval("stats5 of empty interval");
    const auto n = static_cast<double>(x.size());

    double sum = 0.0, sum_sq = 0.0, mn = x[0], mx = x[0];
    for (double v : x) {
        sum += v;
        sum_sq += v * v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    const double mean = sum / n;

    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;

    Stats5 s;
    s.rms = std::sqrt(sum_sq / n);
    s.variance = m2;
    s.energy = sum_sq;
    s.kurtosis = (m2 < 1e-12) ? 0.0 : m4 / (m2 * m2);
    s.dynamic_interval = mx - mn;
    return s;
}

// Biased normalized autocorrelation r[k] = sum x[n]x[n+k] / sum x[n]^2.
inline std::vector<double> autocorr(std::span<const double> x, std::size_t max_lag) {
    if (max_lag >= x.size()) throw InvalidParams("max_lag must be < signal length");
    double denom = 0.0;
    for (double v : x) denom += v * v;
    if (denom == 0.0) throw DegenerateSignal("autocorrelation of all-zero signal");

    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i + k < x.size(); ++i) acc += x[i] * x[i + k];
        r[k] = acc / denom;
    }
    return r;
}

// Same, computed on the mean-removed signal. Periodicity estimation uses this
// form: without mean removal a nonnegative signal keeps a large DC pedestal
// at every lag and aperiodic inputs would never fall under the periodicity
// threshold.
inline std::vector<double> autocorr_centered(std::span<const double> x, std::size_t max_lag) {
    if (max_lag >= x.size()) throw InvalidParams("max_lag must be < signal length");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i] - mean;
    return autocorr(c, max_lag);
}

} // namespace phono
