#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "phono/errors.hpp"
#include "phono/fft.hpp"
#include "phono/recording.hpp"
#include "phono/rng.hpp"

namespace phono {

enum class SoundKind { S1, S2 };

inline const char* to_string(SoundKind k) { return k == SoundKind::S1 ? "S1" : "S2"; }

inline SoundKind sound_kind_from_string(const std::string& s) {
    if (s == "S1") return SoundKind::S1;
    if (s == "S2") return SoundKind::S2;
    throw InvalidParams("unknown sound kind '" + s + "'");
}

enum class MurmurKind { None, AS, MI };

// Generator parameters. systole_s is the S1-center to S2-center spacing;
// murmur noise occupies the S1-offset..S2-onset span.
struct SynthParams {
    std::size_t n_cycles = 10;
    double cycle_s = 0.8;
    double systole_s = 0.3;
    double s1_dur_s = 0.10;
    double s2_dur_s = 0.08;
    std::array<double, 2> s1_freqs = {35.0, 70.0};
    std::array<double, 2> s2_freqs = {55.0, 90.0};
    double s1_amp = 1.0;
    double s2_amp = 0.8;
    MurmurKind murmur = MurmurKind::None;
    double murmur_lo_hz = 100.0;
    double murmur_hi_hz = 400.0; // 600 for MI by convention (see params_for_label)
    double murmur_gain = 0.25;   // murmur RMS relative to the unit S1 peak
    // murmur envelope shape: AS diamonds peak at murmur_peak_frac of the
    // systolic span with slopes raised to murmur_sharpness; MI plateaus are
    // tilted by murmur_tilt (-1 decrescendo .. +1 crescendo)
    double murmur_peak_frac = 0.5;
    double murmur_sharpness = 1.0;
    double murmur_tilt = 0.0;
    double murmur_cycle_jitter = 0.0; // beat-to-beat murmur intensity spread
    double murmur_mod_depth = 0.0;    // slow amplitude texture inside the murmur
    double murmur_mod_hz = 5.0;
    double murmur_fade_in_s = 0.01;   // raised-cosine ramps at the span edges
    double murmur_fade_out_s = 0.01;
    double snr_db = 20.0;
    double timing_jitter = 0.03; // fractional jitter on each cycle length
    double lead_s = 0.4;         // quiet margin before/after the cycle train
    int sample_rate = 2000;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_cycles == 0) throw InvalidParams("n_cycles must be positive");
        if (cycle_s < 0.4 || cycle_s > 2.0) throw InvalidParams("cycle_s outside [0.4, 2.0]");
        if (systole_s < 0.15 || systole_s >= cycle_s - systole_s)
            throw InvalidParams("systole must be in [0.15 s, cycle/2)");
        if (s1_dur_s <= 0.0 || s2_dur_s <= 0.0) throw InvalidParams("durations must be positive");
        if (s1_dur_s + s2_dur_s >= systole_s + 0.1)
            throw InvalidParams("sounds too long for the systole spacing");
        if (!(snr_db > -100.0 && snr_db < 1e6)) throw InvalidParams("snr_db not finite");
        if (murmur_lo_hz >= murmur_hi_hz) throw InvalidParams("murmur band inverted");
        if (murmur_hi_hz > sample_rate / 2.0) throw InvalidParams("murmur band above Nyquist");
        if (timing_jitter < 0.0 || timing_jitter > 0.2)
            throw InvalidParams("timing_jitter outside [0, 0.2]");
        if (murmur_gain < 0.0) throw InvalidParams("murmur_gain negative");
        if (murmur_peak_frac <= 0.0 || murmur_peak_frac >= 1.0)
            throw InvalidParams("murmur_peak_frac outside (0, 1)");
        if (murmur_sharpness <= 0.0) throw InvalidParams("murmur_sharpness not positive");
        if (murmur_tilt < -1.0 || murmur_tilt > 1.0)
            throw InvalidParams("murmur_tilt outside [-1, 1]");
        if (murmur_cycle_jitter < 0.0 || murmur_cycle_jitter > 0.9)
            throw InvalidParams("murmur_cycle_jitter outside [0, 0.9]");
        if (murmur_mod_depth < 0.0 || murmur_mod_depth > 0.8)
            throw InvalidParams("murmur_mod_depth outside [0, 0.8]");
        if (murmur_mod_hz <= 0.0) throw InvalidParams("murmur_mod_hz not positive");
        if (murmur_fade_in_s < 0.0 || murmur_fade_out_s < 0.0)
            throw InvalidParams("murmur fade lengths negative");
        if (sample_rate < 1400) throw InvalidParams("sample_rate below passband Nyquist");
    }
};

struct TruthEvent {
    SoundKind kind;
    double center_t = 0.0;
    double onset_t = 0.0;
    double offset_t = 0.0;
};

struct GroundTruth {
    std::vector<TruthEvent> events;
    ClassLabel label = ClassLabel::N;
};

namespace detail {

// Damped burst envelope e(u) = exp(-3u) sin(pi u) on u in [0,1); peaks at
// u* = atan(pi/3)/pi.
inline double burst_env(double u) {
    return std::exp(-3.0 * u) * std::sin(3.14159265358979323846 * u);
}

inline double burst_peak_frac() {
    const double pi = 3.14159265358979323846;
    return std::atan(pi / 3.0) / pi;
}

// Adds a two-tone damped burst starting at onset_t; the waveform peak is
// scaled to amp.
inline void add_burst(std::vector<double>& x, int fs, double onset_t, double dur,
                      const std::array<double, 2>& freqs, double amp, Rng& rng) {
    const double pi = 3.14159265358979323846;
    const double ph1 = rng.uniform(0.0, 2.0 * pi);
    const double ph2 = rng.uniform(0.0, 2.0 * pi);
    const auto i0 = static_cast<std::ptrdiff_t>(std::lround(onset_t * fs));
    const auto len = static_cast<std::ptrdiff_t>(std::lround(dur * fs));
    std::vector<double> burst(static_cast<std::size_t>(len));
    double peak = 0.0;
    for (std::ptrdiff_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double u = t / dur;
        const double v = burst_env(u) * (std::sin(2.0 * pi * freqs[0] * t + ph1) +
                                         0.8 * std::sin(2.0 * pi * freqs[1] * t + ph2));
        burst[static_cast<std::size_t>(i)] = v;
        peak = std::max(peak, std::abs(v));
    }
    if (peak <= 0.0) return;
    for (std::ptrdiff_t i = 0; i < len; ++i) {
        const auto j = i0 + i;
        if (j >= 0 && j < static_cast<std::ptrdiff_t>(x.size()))
            x[static_cast<std::size_t>(j)] += burst[static_cast<std::size_t>(i)] * amp / peak;
    }
}

// Unit-RMS noise band-limited to [lo, hi] Hz via FFT masking.
inline std::vector<double> band_noise(std::size_t n, int fs, double lo, double hi, Rng& rng) {
    const std::size_t m = next_pow2(std::max<std::size_t>(n, 2));
    std::vector<cplx> buf(m);
    for (auto& v : buf) v = cplx(rng.normal(), 0.0);
    fft(buf);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(m);
        if (f < lo || f > hi) {
            buf[k] = cplx(0.0, 0.0);
            if (k != 0 && k != m / 2) buf[m - k] = cplx(0.0, 0.0);
        }
    }
    ifft(buf);
    std::vector<double> out(n);
    double power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = buf[i].real();
        power += out[i] * out[i];
    }
    const double rms = std::sqrt(power / static_cast<double>(n));
    if (rms > 0.0)
        for (auto& v : out) v /= rms;
    return out;
}

} // namespace detail

// Deterministic synthetic PCG with exact event ground truth.
inline std::pair<Recording, GroundTruth> synth_pcg(const SynthParams& p) {
    p.validate();
    const int fs = p.sample_rate;
    Rng rng(p.seed);

    // 1) cycle schedule (jitter on cycle lengths only)
    std::vector<double> cycle_starts(p.n_cycles);
    double t = p.lead_s;
    for (std::size_t k = 0; k < p.n_cycles; ++k) {
        cycle_starts[k] = t;
        t += p.cycle_s * (1.0 + p.timing_jitter * rng.uniform(-1.0, 1.0));
    }
    const double total_s = t + p.lead_s;
    const auto n = static_cast<std::size_t>(std::lround(total_s * fs));

    const double peak_frac = detail::burst_peak_frac();
    const double d1 = p.s1_dur_s * peak_frac; // onset -> center offsets
    const double d2 = p.s2_dur_s * peak_frac;

    GroundTruth truth;
    truth.label = p.murmur == MurmurKind::None
                      ? ClassLabel::N
                      : (p.murmur == MurmurKind::AS ? ClassLabel::AS : ClassLabel::MI);

    std::vector<double> clean(n, 0.0);

    // 2) heart sound bursts + truth events. The burst track alone defines the
    // SNR reference so the noise floor does not depend on murmur presence.
    struct Span {
        double lo, hi;
    };
    std::vector<Span> murmur_spans;
    for (std::size_t k = 0; k < p.n_cycles; ++k) {
        const double s1_onset = cycle_starts[k];
        const double s1_center = s1_onset + d1;
        const double s2_center = s1_center + p.systole_s;
        const double s2_onset = s2_center - d2;

        detail::add_burst(clean, fs, s1_onset, p.s1_dur_s, p.s1_freqs, p.s1_amp, rng);
        detail::add_burst(clean, fs, s2_onset, p.s2_dur_s, p.s2_freqs, p.s2_amp, rng);

        truth.events.push_back({SoundKind::S1, s1_center, s1_onset, s1_onset + p.s1_dur_s});
        truth.events.push_back({SoundKind::S2, s2_center, s2_onset, s2_onset + p.s2_dur_s});
        murmur_spans.push_back({s1_onset + p.s1_dur_s, s2_onset});
    }

    double burst_power = 0.0;
    for (double v : clean) burst_power += v * v;
    const double burst_rms = std::sqrt(burst_power / static_cast<double>(n));

    // 3) murmur noise over the systolic spans
    if (p.murmur != MurmurKind::None && p.murmur_gain > 0.0) {
        auto noise = detail::band_noise(n, fs, p.murmur_lo_hz, p.murmur_hi_hz, rng);
        const double mod_phase = rng.uniform(0.0, 6.283185307179586);
        for (const auto& span : murmur_spans) {
            const double beat_gain =
                p.murmur_gain * (1.0 + p.murmur_cycle_jitter * rng.uniform(-1.0, 1.0));
            const auto i0 = static_cast<std::size_t>(std::lround(span.lo * fs));
            const auto i1 = std::min(n, static_cast<std::size_t>(std::lround(span.hi * fs)));
            if (i1 <= i0) continue;
            const double width = span.hi - span.lo;
            const double fade_in = std::min(p.murmur_fade_in_s, 0.4 * width);
            const double fade_out = std::min(p.murmur_fade_out_s, 0.4 * width);
            for (std::size_t i = i0; i < i1; ++i) {
                const double ti = static_cast<double>(i) / fs;
                const double u = (ti - span.lo) / width; // 0..1 across the systole
                double env;
                if (p.murmur == MurmurKind::AS) {
                    // asymmetric diamond: rise to murmur_peak_frac, then fall
                    const double tri = u <= p.murmur_peak_frac
                                           ? u / p.murmur_peak_frac
                                           : (1.0 - u) / (1.0 - p.murmur_peak_frac);
                    env = std::pow(std::max(tri, 0.0), p.murmur_sharpness);
                } else {
                    // holosystolic plateau, optionally tilted, raised-cosine ramps
                    env = std::max(1.0 + p.murmur_tilt * (2.0 * u - 1.0), 0.0);
                    const double pi = 3.14159265358979323846;
                    if (ti - span.lo < fade_in)
                        env *= 0.5 - 0.5 * std::cos(pi * (ti - span.lo) / fade_in);
                    if (span.hi - ti < fade_out)
                        env *= 0.5 - 0.5 * std::cos(pi * (span.hi - ti) / fade_out);
                }
                if (p.murmur_mod_depth > 0.0) {
                    const double mod =
                        1.0 + p.murmur_mod_depth *
                                  std::sin(6.283185307179586 * p.murmur_mod_hz * ti + mod_phase);
                    env *= std::max(mod, 0.2);
                }
                clean[i] += beat_gain * env * noise[i];
            }
        }
    }

    // 4) additive white noise at the requested SNR vs the heart sounds
    const double sigma = burst_rms * std::pow(10.0, -p.snr_db / 20.0);
    std::vector<double> x = clean;
    if (sigma > 0.0)
        for (auto& v : x) v += sigma * rng.normal();

    // 5) keep the pre-normalization peak within [-1, 1]
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak > 1.0)
        for (auto& v : x) v /= peak;

    Recording rec;
    rec.samples = std::move(x);
    rec.sample_rate = fs;
    rec.label = truth.label;
    rec.id = "synth";
    return {std::move(rec), std::move(truth)};
}

// Per-label parameter presets: band and envelope shape follow the murmur
// type; everything else stays at the defaults.
inline SynthParams params_for_label(ClassLabel label) {
    SynthParams p;
    switch (label) {
        case ClassLabel::AS:
            p.murmur = MurmurKind::AS;
            p.murmur_lo_hz = 100.0;
            p.murmur_hi_hz = 400.0;
            break;
        case ClassLabel::MI:
            p.murmur = MurmurKind::MI;
            p.murmur_lo_hz = 100.0;
            p.murmur_hi_hz = 600.0;
            break;
        default:
            p.murmur = MurmurKind::None;
            break;
    }
    return p;
}

// One corpus entry with per-recording physiological spread, deterministically
// derived from (seed, label, index).
inline std::pair<Recording, GroundTruth> synth_corpus_item(ClassLabel label, std::size_t index,
                                                           std::uint64_t seed,
                                                           std::size_t n_cycles = 10,
                                                           double snr_db = 20.0) {
    const auto label_ord = static_cast<std::uint64_t>(label);
    Rng derive(seed);
    Rng item = derive.fork(label_ord * 1000003ULL + index);

    SynthParams p = params_for_label(label);
    p.n_cycles = n_cycles;
    p.snr_db = snr_db;
    p.cycle_s = 0.8 * (1.0 + 0.15 * item.uniform(-1.0, 1.0));
    p.systole_s = p.cycle_s * (0.375 + 0.03 * item.uniform(-1.0, 1.0));
    p.murmur_gain = 0.25 * (1.0 + 0.60 * item.uniform(-1.0, 1.0));
    p.murmur_peak_frac = 0.5 + 0.15 * item.uniform(-1.0, 1.0);
    p.murmur_sharpness = 0.95 + 0.25 * item.uniform(-1.0, 1.0);
    p.murmur_tilt = 0.05 + 0.25 * item.uniform(-1.0, 1.0);
    p.murmur_cycle_jitter = 0.3;
    p.murmur_mod_depth = 0.5;
    p.murmur_mod_hz = item.uniform(2.5, 8.0);
    p.murmur_fade_out_s = 0.04 + 0.02 * item.uniform(-1.0, 1.0);
    p.seed = item.next_u64();

    auto [rec, truth] = synth_pcg(p);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03zu", to_string(label), index);
    rec.id = buf;
    for (auto& c : rec.id) c = static_cast<char>(std::tolower(c));
    return {std::move(rec), std::move(truth)};
}

} // namespace phono
