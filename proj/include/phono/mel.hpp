#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "phono/errors.hpp"
#include "phono/fft.hpp"

namespace phono {

constexpr double kLogEnergyFloor = 1e-12;

inline double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
inline double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Triangular filter bank with centers equally spaced on the mel scale.
// Rows are peak-normalized to 1; a triangle too narrow to catch any FFT bin
// falls back to the single bin nearest its center so no row is empty.
struct MelFilterBank {
    std::size_t n_filters = 0;
    std::size_t n_fft = 0;
    int sample_rate = 0;
    double f_min = 0.0, f_max = 0.0;
    std::vector<double> weights;          // n_filters x (n_fft/2 + 1), row-major
    std::vector<double> center_hz;        // filter peak frequencies

    std::size_t n_bins() const { return n_fft / 2 + 1; }
    std::span<const double> row(std::size_t i) const {
        return {weights.data() + i * n_bins(), n_bins()};
    }
};

inline MelFilterBank build_mel_filterbank(std::size_t n_filters, std::size_t n_fft,
                                          int sample_rate, double f_min, double f_max) {
    if (f_min >= f_max) throw BadBand("f_min >= f_max");
    if (f_max > sample_rate / 2.0) throw BadBand("f_max above Nyquist");
    if (n_filters < 2) throw BadBand("need at least 2 filters");
    if (!is_pow2(n_fft)) throw BadBand("n_fft must be a power of two");

    MelFilterBank fb;
    fb.n_filters = n_filters;
    fb.n_fft = n_fft;
    fb.sample_rate = sample_rate;
    fb.f_min = f_min;
    fb.f_max = f_max;

    const std::size_t n_bins = fb.n_bins();
    const double m_lo = hz_to_mel(f_min);
    const double m_hi = hz_to_mel(f_max);
    std::vector<double> edges_hz(n_filters + 2);
    for (std::size_t i = 0; i < edges_hz.size(); ++i)
        edges_hz[i] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                                           static_cast<double>(n_filters + 1));

    fb.weights.assign(n_filters * n_bins, 0.0);
    fb.center_hz.resize(n_filters);
    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(n_fft);

    for (std::size_t m = 0; m < n_filters; ++m) {
        const double fl = edges_hz[m], fc = edges_hz[m + 1], fr = edges_hz[m + 2];
        fb.center_hz[m] = fc;
        double peak = 0.0;
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double f = static_cast<double>(k) * bin_hz;
            double w = 0.0;
            if (f > fl && f < fc)
                w = (f - fl) / (fc - fl);
            else if (f >= fc && f < fr)
                w = (fr - f) / (fr - fc);
            fb.weights[m * n_bins + k] = w;
            peak = std::max(peak, w);
        }
        if (peak > 0.0) {
            for (std::size_t k = 0; k < n_bins; ++k) fb.weights[m * n_bins + k] /= peak;
        } else {
            // Narrow triangle between bins: take the nearest bin to the center.
            const auto k = static_cast<std::size_t>(std::clamp(
                std::lround(fc / bin_hz), 0L, static_cast<long>(n_bins - 1)));
            fb.weights[m * n_bins + k] = 1.0;
        }
    }
    return fb;
}

// e_i = row_i . spectrum (linear band energies).
inline std::vector<double> mel_energies(std::span<const double> spectrum,
                                        const MelFilterBank& fb) {
    if (spectrum.size() != fb.n_bins())
        throw BadBand("spectrum length does not match filter bank");
    std::vector<double> out(fb.n_filters);
    for (std::size_t m = 0; m < fb.n_filters; ++m) {
        const auto row = fb.row(m);
        double e = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) e += row[k] * spectrum[k];
        out[m] = e;
    }
    return out;
}

// e_i = ln(max(row_i . spectrum, floor)).
inline std::vector<double> mel_log_energies(std::span<const double> spectrum,
                                            const MelFilterBank& fb) {
    auto out = mel_energies(spectrum, fb);
    for (auto& e : out) e = std::log(std::max(e, kLogEnergyFloor));
    return out;
}

// Orthonormal DCT-II of x.
inline std::vector<double> dct_ii(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::cos(pi * static_cast<double>(k) *
                                   (2.0 * static_cast<double>(i) + 1.0) /
                                   (2.0 * static_cast<double>(n)));
        const double scale =
            (k == 0) ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
        out[k] = acc * scale;
    }
    return out;
}

// Cepstral coefficients 1..n_coeffs of one windowed frame (the gain-carrying
// 0th coefficient is excluded).
inline std::vector<double> mfcc_frame(std::span<const double> windowed_frame,
                                      const MelFilterBank& fb, std::size_t n_coeffs = 12) {
    const auto spec = power_spectrum(windowed_frame, fb.n_fft);
    const auto loge = mel_log_energies(spec, fb);
    const auto c = dct_ii(loge);
    if (n_coeffs + 1 > c.size()) throw BadBand("n_coeffs exceeds filter count");
    return std::vector<double>(c.begin() + 1, c.begin() + 1 + static_cast<std::ptrdiff_t>(n_coeffs));
}

} // namespace phono
