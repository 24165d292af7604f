#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

// Daubechies-8 analysis lowpass (16 taps, 8 vanishing moments), obtained by
// spectral factorization of the maximally-flat halfband polynomial.
inline constexpr std::array<double, 16> kDb8Lo = {
    -0.00011747678412476953, 0.00067544940645056937, -0.00039174037337694705,
    -0.0048703529934515743,  0.0087460940474057767,  0.013981027917398282,
    -0.044088253930794752,   -0.017369301001807546,  0.12874742662047846,
    0.00047248457391328277,  -0.28401554296154693,   -0.015829105256349306,
    0.58535468365420671,     0.67563073629728981,    0.31287159091429997,
    0.05441584224310401,
};

// Multilevel coefficients. details[0] is the finest level (cd1).
struct WaveletCoeffs {
    std::size_t levels = 0;
    std::vector<double> approx;
    std::vector<std::vector<double>> details;

    const std::vector<double>& detail(std::size_t level) const { return details[level - 1]; }
};

namespace detail {

inline std::array<double, 16> db8_hi() {
    std::array<double, 16> g{};
    for (std::size_t m = 0; m < 16; ++m)
        g[m] = (m % 2 == 0 ? 1.0 : -1.0) * kDb8Lo[15 - m];
    return g;
}

// One periodized analysis step: x (even length n) -> approx, detail (n/2 each).
inline void dwt_step(std::span<const double> x, std::vector<double>& approx,
                     std::vector<double>& det) {
    static const std::array<double, 16> g = db8_hi();
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    approx.resize(half);
    det.resize(half);
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0, d = 0.0;
        for (std::size_t m = 0; m < 16; ++m) {
            const double v = x[(2 * k + m) % n];
            a += kDb8Lo[m] * v;
            d += g[m] * v;
        }
        approx[k] = a;
        det[k] = d;
    }
}

// Transpose of dwt_step (exact inverse, since the step is orthogonal).
inline std::vector<double> idwt_step(std::span<const double> approx,
                                     std::span<const double> det) {
    static const std::array<double, 16> g = db8_hi();
    const std::size_t half = approx.size();
    const std::size_t n = 2 * half;
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        for (std::size_t m = 0; m < 16; ++m) {
            const std::size_t idx = (2 * k + m) % n;
            x[idx] += kDb8Lo[m] * approx[k] + g[m] * det[k];
        }
    }
    return x;
}

} // namespace detail

// Periodized orthogonal db8 decomposition. Requires the input length to be
// divisible by 2^levels so every stage halves cleanly; total coefficient
// count then equals the input length and energy is preserved exactly.
inline WaveletCoeffs dwt_db8(std::span<const double> x, std::size_t levels) {
    if (levels < 1) throw InvalidParams("levels must be >= 1");
    const std::size_t block = std::size_t{1} << levels;
    if (x.size() < block)
        throw TooShort("input of " + std::to_string(x.size()) + " shorter than 2^levels = " +
                       std::to_string(block));
    if (x.size() % block != 0)
        throw TooShort("input length " + std::to_string(x.size()) +
                       " not divisible by 2^levels = " + std::to_string(block));

    WaveletCoeffs c;
    c.levels = levels;
    c.details.resize(levels);
    std::vector<double> cur(x.begin(), x.end());
    for (std::size_t l = 0; l < levels; ++l) {
        std::vector<double> approx;
        detail::dwt_step(cur, approx, c.details[l]);
        cur = std::move(approx);
    }
    c.approx = std::move(cur);
    return c;
}

inline std::vector<double> idwt_db8(const WaveletCoeffs& c) {
    std::vector<double> cur = c.approx;
    for (std::size_t l = c.levels; l >= 1; --l) cur = detail::idwt_step(cur, c.details[l - 1]);
    return cur;
}

} // namespace phono
