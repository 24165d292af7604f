#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

// Short-time analysis geometry. Frame k covers samples [k*hop, k*hop + frame_len).
struct FrameGrid {
    std::size_t frame_len = 0;
    std::size_t hop = 0;
    std::size_t n_frames = 0;
    int sample_rate = 0;

    double frame_time(std::size_t k) const {
        return (static_cast<double>(k * hop) + 0.5 * static_cast<double>(frame_len)) /
               sample_rate;
    }
    // Frame index whose center is nearest to time t, clamped to the grid.
    std::size_t frame_at(double t) const {
        const double k = (t * sample_rate - 0.5 * static_cast<double>(frame_len)) /
                         static_cast<double>(hop);
        const auto i = static_cast<std::ptrdiff_t>(std::lround(k));
        if (i < 0) return 0;
        return std::min(static_cast<std::size_t>(i), n_frames - 1);
    }
};

// Hamming-windowed frames in one flat buffer (row-major, n_frames x frame_len).
struct Frames {
    FrameGrid grid;
    std::vector<double> data;

    std::span<const double> frame(std::size_t k) const {
        return {data.data() + k * grid.frame_len, grid.frame_len};
    }
};

inline std::vector<double> hamming_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
    return w;
}

inline Frames frame_signal(std::span<const double> samples, std::size_t frame_len,
                           std::size_t hop, int sample_rate) {
    if (samples.size() < frame_len)
        throw SignalTooShort("signal of " + std::to_string(samples.size()) +
                             " samples shorter than frame of " + std::to_string(frame_len));
    if (hop == 0 || hop > frame_len) throw InvalidParams("hop must be in [1, frame_len]");

    Frames out;
    out.grid.frame_len = frame_len;
    out.grid.hop = hop;
    out.grid.n_frames = (samples.size() - frame_len) / hop + 1;
    out.grid.sample_rate = sample_rate;

    const auto w = hamming_window(frame_len);
    out.data.resize(out.grid.n_frames * frame_len);
    for (std::size_t k = 0; k < out.grid.n_frames; ++k)
        for (std::size_t i = 0; i < frame_len; ++i)
            out.data[k * frame_len + i] = samples[k * hop + i] * w[i];
    return out;
}

} // namespace phono
