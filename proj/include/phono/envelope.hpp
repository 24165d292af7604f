#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "phono/errors.hpp"
#include "phono/fft.hpp"

namespace phono {

// Magnitude of the analytic signal (one-sided spectrum method).
inline std::vector<double> analytic_magnitude(std::span<const double> x) {
    if (x.empty()) throw EmptyInterval("empty signal");
    const std::size_t n = x.size();
    std::vector<cplx> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cplx(x[i], 0.0);
    fft(buf);
    // Double positive frequencies, zero negative ones; DC (and Nyquist for
    // even n) stay as-is.
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) buf[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) buf[k] = cplx(0.0, 0.0);
    ifft(buf);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(buf[i]);
    return out;
}

// Centered moving average; the window shrinks at the edges.
inline std::vector<double> moving_average(std::span<const double> x, std::size_t width) {
    const std::size_t n = x.size();
    if (width <= 1 || n == 0) return {x.begin(), x.end()};
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    const std::size_t half = width / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(i + half, n - 1);
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// Smoothed amplitude envelope: |analytic signal| through a centered moving
// average of smooth_ms milliseconds.
inline std::vector<double> envelope(std::span<const double> x, int sample_rate,
                                    double smooth_ms = 50.0) {
    const auto mag = analytic_magnitude(x);
    const auto width = static_cast<std::size_t>(
        std::max(1L, std::lround(smooth_ms * 1e-3 * sample_rate)));
    return moving_average(mag, width);
}

} // namespace phono
