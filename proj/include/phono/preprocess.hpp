#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "phono/errors.hpp"
#include "phono/recording.hpp"

namespace phono {

constexpr int kMinSampleRate = 1400; // Nyquist bound for the 700 Hz passband
constexpr int kCanonicalRate = 2000; // internal rate after ingest

namespace detail {

inline double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    const double px = 3.14159265358979323846 * x;
    return std::sin(px) / px;
}

// Blackman window on [-1, 1].
inline double blackman(double u) {
    const double pi = 3.14159265358979323846;
    const double t = 0.5 * (u + 1.0); // [0,1]
    return 0.42 - 0.5 * std::cos(2.0 * pi * t) + 0.08 * std::cos(4.0 * pi * t);
}

} // namespace detail

// Band-limited rate conversion with a windowed-sinc kernel. The cutoff sits
// at 0.45 of the lower of the two rates, so nothing representable at the
// target aliases.
inline Recording resample(const Recording& rec, int target_rate) {
    if (target_rate < kMinSampleRate)
        throw RateTooLow("target rate " + std::to_string(target_rate) + " Hz < " +
                         std::to_string(kMinSampleRate) + " Hz");
    if (rec.samples.empty()) throw DegenerateSignal("empty recording " + rec.id);
    if (target_rate == rec.sample_rate) return rec;

    const double src = rec.sample_rate;
    const double dst = target_rate;
    const double ratio = dst / src;
    const auto n_in = static_cast<std::ptrdiff_t>(rec.samples.size());
    const auto n_out =
        static_cast<std::size_t>(std::llround(static_cast<double>(n_in) * ratio));

    // Cutoff in cycles per input sample; 16 sinc lobes per side.
    const double fc = 0.45 * std::min(src, dst) / src;
    const double half_width = 16.0 / (2.0 * fc);
    const auto half = static_cast<std::ptrdiff_t>(std::ceil(half_width));

    Recording out;
    out.sample_rate = target_rate;
    out.label = rec.label;
    out.id = rec.id;
    out.samples.resize(n_out);

    for (std::size_t m = 0; m < n_out; ++m) {
        const double center = static_cast<double>(m) / ratio; // in input samples
        const auto k0 = static_cast<std::ptrdiff_t>(std::floor(center)) - half;
        const auto k1 = static_cast<std::ptrdiff_t>(std::floor(center)) + half + 1;
        double acc = 0.0;
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(k0, 0);
             k <= std::min<std::ptrdiff_t>(k1, n_in - 1); ++k) {
            const double u = center - static_cast<double>(k);
            acc += rec.samples[static_cast<std::size_t>(k)] * 2.0 * fc *
                   detail::sinc(2.0 * fc * u) * detail::blackman(u / half_width);
        }
        out.samples[m] = acc;
    }
    return out;
}

namespace detail {

// Single biquad: y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2].
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

    void apply(std::vector<double>& x) const {
        double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
        for (double& v : x) {
            const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
            x2 = x1;
            x1 = v;
            y2 = y1;
            y1 = y;
            v = y;
        }
    }
};

// Butterworth bandpass biquad (one analog pole pair) via prewarped bilinear
// transform. Unity gain at the geometric-mean center frequency.
inline Biquad design_bandpass(double f_lo, double f_hi, double fs) {
    const double pi = 3.14159265358979323846;
    const double k = 2.0 * fs;
    const double w1 = k * std::tan(pi * f_lo / fs); // prewarped edges
    const double w2 = k * std::tan(pi * f_hi / fs);
    const double bw = w2 - w1;
    const double w0sq = w1 * w2;

    const double a0 = k * k + bw * k + w0sq;
    Biquad q;
    q.b0 = bw * k / a0;
    q.b1 = 0.0;
    q.b2 = -bw * k / a0;
    q.a1 = (2.0 * w0sq - 2.0 * k * k) / a0;
    q.a2 = (k * k - bw * k + w0sq) / a0;
    return q;
}

// Forward-backward filtering with odd-reflect padding at both ends. Net
// magnitude response is |H|^2 with zero phase.
inline std::vector<double> filtfilt(const Biquad& q, const std::vector<double>& x,
                                    std::size_t pad) {
    const std::size_t n = x.size();
    pad = std::min(pad, n > 1 ? n - 1 : 0);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.front() - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x.back() - x[n - 1 - i]);

    q.apply(ext);
    std::reverse(ext.begin(), ext.end());
    q.apply(ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                               ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

} // namespace detail

// Zero-phase 5-700 Hz bandpass (2nd-order recursive section applied forward
// and backward, 4th-order net magnitude).
inline Recording bandpass(const Recording& rec, double f_lo = 5.0, double f_hi = 700.0,
                          double settle_s = 0.2) {
    if (rec.sample_rate < kMinSampleRate)
        throw RateTooLow("sample rate " + std::to_string(rec.sample_rate) + " Hz below " +
                         std::to_string(kMinSampleRate) + " Hz");
    if (rec.samples.empty()) throw DegenerateSignal("empty recording " + rec.id);

    const auto q = detail::design_bandpass(f_lo, f_hi, rec.sample_rate);
    const auto pad = static_cast<std::size_t>(std::lround(settle_s * rec.sample_rate));

    Recording out = rec;
    out.samples = detail::filtfilt(q, rec.samples, pad);
    return out;
}

// Scales the signal so that max |sample| is exactly 1.
inline Recording normalize(const Recording& rec) {
    double peak = 0.0;
    for (double s : rec.samples) peak = std::max(peak, std::abs(s));
    if (peak == 0.0) throw DegenerateSignal("all-zero recording " + rec.id);
    Recording out = rec;
    for (double& s : out.samples) s /= peak;
    return out;
}

// Canonical ingest chain: resample to the internal rate, bandpass, normalize.
inline Recording preprocess(const Recording& rec, int target_rate = kCanonicalRate,
                            double f_lo = 5.0, double f_hi = 700.0, double settle_s = 0.2) {
    return normalize(bandpass(resample(rec, target_rate), f_lo, f_hi, settle_s));
}

} // namespace phono
