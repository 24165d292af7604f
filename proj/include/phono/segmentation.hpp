#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "phono/envelope.hpp"
#include "phono/errors.hpp"
#include "phono/framing.hpp"
#include "phono/mel.hpp"
#include "phono/recording.hpp"
#include "phono/stats.hpp"
#include "phono/synth.hpp"
#include "phono/wavelet.hpp"

namespace phono {

// All segmentation tunables. The mechanism is fixed; these constants are
// defaults chosen on synthetic data and overridable through the config file.
struct SegmentationConfig {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    std::size_t n_fft = 256;
    std::size_t mel_bands = 128;
    std::size_t dwt_levels = 5;
    double f_min_hz = 5.0;
    double f_max_hz = 700.0;
    std::size_t smooth_frames = 3;
    double min_duration_s = 3.0;

    double cycle_min_s = 0.4;
    double cycle_max_s = 2.0;
    double systole_min_s = 0.15;
    double min_periodicity = 0.1;
    double cycle_peak_tolerance = 0.85; // accept the smallest near-max lag

    double window_cycles = 1.5;      // peak-detection window length
    double window_hop_cycles = 0.5;  // and its hop
    double thresh_max_weight = 0.15; // theta = 0.15 max + 0.85 mean
    double thresh_mean_weight = 0.85;
    double refractory_cycles = 0.2;  // min spacing between accepted peaks

    double match_cycles = 0.2;             // comb slot matching radius
    double correction_window_cycles = 0.15;
    double correction_min_value = 0.1;

    double envelope_smooth_ms = 50.0;
    double event_min_s = 0.02;
    double event_max_s = 0.25;
    double boundary_search_max_s = 0.10; // per-side crossing search extent
};

// Per-frame cd5 energy of the mel-log spectrum, max-normalized.
struct FeatureSignal {
    std::vector<double> values;
    double t0 = 0.0; // center time of frame 0, seconds
    double dt = 0.0; // frame hop, seconds
    std::string source_id;

    double time_of(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    std::size_t index_near(double t) const {
        const auto k = static_cast<std::ptrdiff_t>(std::lround((t - t0) / dt));
        if (k < 0) return 0;
        return std::min(static_cast<std::size_t>(k), values.size() - 1);
    }
};

struct CycleEstimate {
    double cycle_s = 0.0;
    double systole_s = 0.0;
    bool clamped = false;
};

struct HeartSoundEvent {
    SoundKind kind = SoundKind::S1;
    double peak_t = 0.0;
    std::size_t onset_i = 0;  // sample indices; *_t fields are i / sample_rate
    std::size_t offset_i = 0;
    double onset_t = 0.0;
    double offset_t = 0.0;
};

// Half-open sample interval [begin, end).
struct SampleSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t length() const { return end - begin; }
};

// One complete S1..next-S1 span. intervals8 partitions
// [s1.onset, diastole.end) exactly: S1, sys1..3, S2, dia1..3.
struct CardiacCycle {
    HeartSoundEvent s1, s2;
    std::array<SampleSpan, 8> intervals8;

    SampleSpan systole() const { return {intervals8[1].begin, intervals8[3].end}; }
    SampleSpan diastole() const { return {intervals8[5].begin, intervals8[7].end}; }
};

struct SegmentationResult {
    std::string id;
    int sample_rate = 0;
    CycleEstimate estimate;
    std::vector<HeartSoundEvent> events; // strictly alternating kinds
    std::vector<CardiacCycle> cycles;
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// 1) feature signal

inline FeatureSignal feature_signal(const Recording& rec, const SegmentationConfig& cfg = {}) {
    if (rec.duration_s() < cfg.min_duration_s)
        throw SignalTooShort(rec.id + ": " + std::to_string(rec.duration_s()) +
                             " s < " + std::to_string(cfg.min_duration_s) + " s");

    const int fs = rec.sample_rate;
    const auto frame_len = static_cast<std::size_t>(std::lround(cfg.frame_ms * 1e-3 * fs));
    const auto hop = static_cast<std::size_t>(std::lround(cfg.hop_ms * 1e-3 * fs));
    const auto frames = frame_signal(rec.samples, frame_len, hop, fs);
    const auto fb = build_mel_filterbank(cfg.mel_bands, cfg.n_fft, fs, cfg.f_min_hz, cfg.f_max_hz);

    // Linear band energies, not log: the wavelet detail must track where the
    // energy actually sits so the loud, narrow heart sounds outweigh broadband
    // murmur noise; log compression would flatten that contrast away.
    std::vector<double> vals(frames.grid.n_frames);
    for (std::size_t k = 0; k < frames.grid.n_frames; ++k) {
        const auto spec = power_spectrum(frames.frame(k), cfg.n_fft);
        const auto energies = mel_energies(spec, fb);
        const auto coeffs = dwt_db8(energies, cfg.dwt_levels);
        double e = 0.0;
        for (double c : coeffs.detail(cfg.dwt_levels)) e += c * c;
        vals[k] = e;
    }

    vals = moving_average(vals, cfg.smooth_frames);
    const double peak = *std::max_element(vals.begin(), vals.end());
    if (peak <= 0.0) throw DegenerateSignal(rec.id + ": feature signal is identically zero");
    for (auto& v : vals) v /= peak;

    FeatureSignal out;
    out.values = std::move(vals);
    out.t0 = frames.grid.frame_time(0);
    out.dt = static_cast<double>(hop) / fs;
    out.source_id = rec.id;
    return out;
}

// ---------------------------------------------------------------------------
// 2) cycle / systole estimation

inline CycleEstimate estimate_cycle(const FeatureSignal& fs, const SegmentationConfig& cfg = {}) {
    const std::size_t n = fs.values.size();
    if (static_cast<double>(n) * fs.dt < cfg.min_duration_s)
        throw SignalTooShort("feature signal covers less than " +
                             std::to_string(cfg.min_duration_s) + " s");

    const auto lag_min = static_cast<std::size_t>(std::ceil(cfg.cycle_min_s / fs.dt));
    const auto lag_max =
        std::min(n - 1, static_cast<std::size_t>(std::floor(cfg.cycle_max_s / fs.dt)));
    if (lag_min >= lag_max) throw SignalTooShort("too few frames for cycle estimation");

    const auto r = autocorr_centered(fs.values, lag_max);

    double r_best = r[lag_min];
    for (std::size_t k = lag_min; k <= lag_max; ++k) r_best = std::max(r_best, r[k]);
    if (r_best < cfg.min_periodicity)
        throw NoPeriodicity("autocorrelation peak " + std::to_string(r_best) + " below " +
                            std::to_string(cfg.min_periodicity));

    // Integer multiples of the true period correlate almost as strongly as
    // the period itself; plain argmax would sometimes lock onto the double
    // lag. Take the smallest local maximum within tolerance of the best,
    // falling back to the global argmax if none qualifies.
    std::size_t cycle_lag = lag_min;
    bool found = false;
    for (std::size_t k = lag_min; k <= lag_max && !found; ++k) {
        if (r[k] >= cfg.cycle_peak_tolerance * r_best && r[k] >= r[k - 1] &&
            (k == lag_max || r[k] >= r[k + 1])) {
            cycle_lag = k;
            found = true;
        }
    }
    if (!found) {
        for (std::size_t k = lag_min; k <= lag_max; ++k)
            if (r[k] > r[cycle_lag]) cycle_lag = k;
    }

    const auto sys_min = static_cast<std::size_t>(std::ceil(cfg.systole_min_s / fs.dt));
    const auto sys_max = cycle_lag / 2;
    CycleEstimate est;
    est.cycle_s = static_cast<double>(cycle_lag) * fs.dt;
    if (sys_min > sys_max) {
        est.systole_s = static_cast<double>(sys_min) * fs.dt;
        est.clamped = true;
    } else {
        std::size_t sys_lag = sys_min;
        for (std::size_t k = sys_min; k <= sys_max; ++k)
            if (r[k] > r[sys_lag]) sys_lag = k;
        if (2 * sys_lag >= cycle_lag) { // systole must stay shorter than diastole
            sys_lag = cycle_lag / 2 - (cycle_lag % 2 == 0 ? 1 : 0);
            est.clamped = true;
        }
        est.systole_s = static_cast<double>(sys_lag) * fs.dt;
    }
    return est;
}

// ---------------------------------------------------------------------------
// 3) adaptive-threshold peak detection

inline std::vector<std::size_t> detect_peaks(const FeatureSignal& fs, const CycleEstimate& est,
                                             const SegmentationConfig& cfg = {}) {
    const std::size_t n = fs.values.size();
    if (n < 3) return {};
    const auto win = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::lround(cfg.window_cycles * est.cycle_s / fs.dt)));
    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(cfg.window_hop_cycles * est.cycle_s / fs.dt)));

    std::vector<char> is_peak(n, 0);
    for (std::size_t start = 0;; start += hop) {
        const std::size_t end = std::min(n, start + win);
        double mx = fs.values[start], mean = 0.0;
        for (std::size_t i = start; i < end; ++i) {
            mx = std::max(mx, fs.values[i]);
            mean += fs.values[i];
        }
        mean /= static_cast<double>(end - start);
        const double theta = cfg.thresh_max_weight * mx + cfg.thresh_mean_weight * mean;

        const std::size_t lo = std::max<std::size_t>(start, 1);
        const std::size_t hi = std::min(end, n - 1);
        for (std::size_t i = lo; i < hi; ++i)
            if (fs.values[i] > theta && fs.values[i] > fs.values[i - 1] &&
                fs.values[i] > fs.values[i + 1])
                is_peak[i] = 1;

        if (end == n) break;
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i)
        if (is_peak[i]) candidates.push_back(i);

    // enforce the refractory spacing, strongest peaks first
    const auto refr = static_cast<std::size_t>(
        std::lround(cfg.refractory_cycles * est.cycle_s / fs.dt));
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        if (fs.values[a] != fs.values[b]) return fs.values[a] > fs.values[b];
        return a < b;
    });
    std::vector<std::size_t> accepted;
    for (std::size_t c : candidates) {
        bool ok = true;
        for (std::size_t a : accepted)
            if ((c > a ? c - a : a - c) < refr) {
                ok = false;
                break;
            }
        if (ok) accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

// ---------------------------------------------------------------------------
// 4) reference-comb labeling + error correction

struct LabeledPeak {
    SoundKind kind = SoundKind::S1;
    std::size_t frame = 0;
    double t = 0.0;
    double value = 0.0;
};

namespace detail {

struct CombSlot {
    SoundKind kind;
    double t;
};

// Greedy closest-first one-to-one assignment of peaks to comb slots.
inline std::vector<std::pair<std::size_t, std::size_t>> match_to_comb(
    const std::vector<double>& peak_times, const std::vector<CombSlot>& slots, double radius) {
    struct Cand {
        double dist;
        std::size_t peak, slot;
    };
    std::vector<Cand> cands;
    for (std::size_t p = 0; p < peak_times.size(); ++p)
        for (std::size_t s = 0; s < slots.size(); ++s) {
            const double d = std::abs(peak_times[p] - slots[s].t);
            if (d <= radius) cands.push_back({d, p, s});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.peak != b.peak) return a.peak < b.peak;
        return a.slot < b.slot;
    });
    std::vector<char> peak_used(peak_times.size(), 0), slot_used(slots.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : cands) {
        if (peak_used[c.peak] || slot_used[c.slot]) continue;
        peak_used[c.peak] = 1;
        slot_used[c.slot] = 1;
        out.emplace_back(c.peak, c.slot);
    }
    return out;
}

inline std::vector<CombSlot> build_comb(double anchor_t, SoundKind anchor_kind, double cycle,
                                        double systole, double t_lo, double t_hi) {
    // S1 grid: anchor if S1, else shifted back by the systole spacing.
    const double s1_0 = anchor_kind == SoundKind::S1 ? anchor_t : anchor_t - systole;
    std::vector<CombSlot> slots;
    const auto k_lo = static_cast<std::ptrdiff_t>(std::floor((t_lo - cycle - s1_0) / cycle));
    const auto k_hi = static_cast<std::ptrdiff_t>(std::ceil((t_hi + cycle - s1_0) / cycle));
    for (std::ptrdiff_t k = k_lo; k <= k_hi; ++k) {
        const double s1_t = s1_0 + static_cast<double>(k) * cycle;
        slots.push_back({SoundKind::S1, s1_t});
        slots.push_back({SoundKind::S2, s1_t + systole});
    }
    return slots;
}

} // namespace detail

inline std::vector<LabeledPeak> label_events(const std::vector<std::size_t>& peaks,
                                             const FeatureSignal& fs, const CycleEstimate& est,
                                             const SegmentationConfig& cfg = {}) {
    if (peaks.size() < 2)
        throw TooFewPeaks("need at least 2 peaks, have " + std::to_string(peaks.size()));

    std::vector<double> times(peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i) times[i] = fs.time_of(peaks[i]);

    std::size_t anchor = 0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
        if (fs.values[peaks[i]] > fs.values[peaks[anchor]]) anchor = i;

    const double radius = cfg.match_cycles * est.cycle_s;
    const double t_lo = times.front(), t_hi = times.back();

    // two hypotheses: the anchor is an S1 or an S2; strict > keeps the S1
    // hypothesis on ties
    std::vector<LabeledPeak> best;
    std::size_t best_count = 0;
    bool have_best = false;
    for (SoundKind hyp : {SoundKind::S1, SoundKind::S2}) {
        const auto slots = detail::build_comb(times[anchor], hyp, est.cycle_s, est.systole_s,
                                              t_lo, t_hi);
        const auto matches = detail::match_to_comb(times, slots, radius);
        if (have_best && matches.size() <= best_count) continue;
        std::vector<LabeledPeak> labeled;
        for (const auto& [p, s] : matches)
            labeled.push_back({slots[s].kind, peaks[p], times[p], fs.values[peaks[p]]});
        std::sort(labeled.begin(), labeled.end(),
                  [](const LabeledPeak& a, const LabeledPeak& b) { return a.t < b.t; });
        best = std::move(labeled);
        best_count = matches.size();
        have_best = true;
    }

    if (best.size() < 2) throw TooFewPeaks("comb matching left fewer than 2 events");

    // error correction (a): enforce strict alternation
    const double slot_win = cfg.correction_window_cycles * est.cycle_s;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < best.size(); ++i) {
            if (best[i].kind != best[i + 1].kind) continue;
            const SoundKind missing =
                best[i].kind == SoundKind::S1 ? SoundKind::S2 : SoundKind::S1;
            const double expected =
                best[i].kind == SoundKind::S1
                    ? best[i].t + est.systole_s
                    : best[i].t + (est.cycle_s - est.systole_s);
            // search strictly between the two same-kind peaks
            const double w_lo = std::max(expected - slot_win, best[i].t + fs.dt);
            const double w_hi = std::min(expected + slot_win, best[i + 1].t - fs.dt);
            std::size_t best_frame = 0;
            double best_val = -1.0;
            if (w_lo <= w_hi) {
                for (std::size_t k = fs.index_near(w_lo); k <= fs.index_near(w_hi); ++k) {
                    const double tk = fs.time_of(k);
                    if (tk <= best[i].t || tk >= best[i + 1].t) continue;
                    if (fs.values[k] > best_val) {
                        best_val = fs.values[k];
                        best_frame = k;
                    }
                }
            }
            if (best_val > cfg.correction_min_value) {
                LabeledPeak ins{missing, best_frame, fs.time_of(best_frame), best_val};
                best.insert(best.begin() + static_cast<std::ptrdiff_t>(i) + 1, ins);
            } else {
                // drop the weaker of the two same-kind peaks
                const std::size_t victim = best[i].value <= best[i + 1].value ? i : i + 1;
                best.erase(best.begin() + static_cast<std::ptrdiff_t>(victim));
            }
            changed = true;
            break;
        }
    }

    if (best.size() < 2) throw TooFewPeaks("error correction left fewer than 2 events");

    // error correction (b): systole must be shorter than diastole on average
    double s1s2 = 0.0, s2s1 = 0.0;
    std::size_t n12 = 0, n21 = 0;
    for (std::size_t i = 0; i + 1 < best.size(); ++i) {
        const double gap = best[i + 1].t - best[i].t;
        if (best[i].kind == SoundKind::S1) {
            s1s2 += gap;
            ++n12;
        } else {
            s2s1 += gap;
            ++n21;
        }
    }
    if (n12 > 0 && n21 > 0 && s1s2 / static_cast<double>(n12) >= s2s1 / static_cast<double>(n21)) {
        for (auto& e : best)
            e.kind = e.kind == SoundKind::S1 ? SoundKind::S2 : SoundKind::S1;
    }
    return best;
}

// ---------------------------------------------------------------------------
// 5) boundary refinement and cycle assembly

namespace detail {

// Nearest crossings of env with thr around peak sample p, capped to [lo, hi].
// A crossing is a sign change of env - thr in either direction: a quiet-side
// boundary crosses downward, while an event pressed against louder content
// (e.g. an S2 at the end of a holosystolic murmur) crosses upward at the
// interface. A side without any crossing falls back to its cap. Returns false
// only when the window never interacts with the threshold at all (the whole
// neighborhood sits below it).
inline bool find_crossings(const std::vector<double>& env, double thr, std::size_t p,
                           std::size_t lo, std::size_t hi, std::size_t& onset,
                           std::size_t& offset) {
    bool left_found = false;
    for (std::size_t i = p; i > lo; --i) {
        if ((env[i] > thr) != (env[i - 1] > thr)) {
            onset = i;
            left_found = true;
            break;
        }
    }
    if (!left_found) onset = lo;

    bool right_found = false;
    for (std::size_t j = p; j < hi; ++j) {
        if ((env[j] > thr) != (env[j + 1] > thr)) {
            offset = j + 1;
            right_found = true;
            break;
        }
    }
    if (!right_found) offset = hi;

    if (!left_found && !right_found && env[p] <= thr) return false;
    return true;
}

} // namespace detail

inline SegmentationResult refine_boundaries(const Recording& rec,
                                            const std::vector<LabeledPeak>& labeled,
                                            const CycleEstimate& est,
                                            const SegmentationConfig& cfg = {}) {
    const int fs = rec.sample_rate;
    const std::size_t n = rec.samples.size();

    SegmentationResult out;
    out.id = rec.id;
    out.sample_rate = fs;
    out.estimate = est;

    // S1 boundaries come from the signal envelope, S2 boundaries from the
    // envelope of the first difference; each thresholded at its own mean.
    const auto env1 = envelope(rec.samples, fs, cfg.envelope_smooth_ms);
    std::vector<double> diff(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) diff[i] = rec.samples[i + 1] - rec.samples[i];
    const auto env2 = envelope(diff, fs, cfg.envelope_smooth_ms);

    auto mean_of = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        return m / static_cast<double>(v.size());
    };
    const double thr1 = mean_of(env1);
    const double thr2 = mean_of(env2);

    const auto wmin = static_cast<std::size_t>(std::lround(cfg.event_min_s * fs));
    const auto wmax = static_cast<std::size_t>(std::lround(cfg.event_max_s * fs));

    // Per-side search extent: half the distance to the neighboring event, but
    // never further than boundary_search_max_s. Without the absolute cap a
    // holosystolic murmur that stays above the mean threshold would drag the
    // S1 offset all the way to the S2 onset and squeeze the systole empty.
    const auto side_max = static_cast<std::size_t>(std::lround(cfg.boundary_search_max_s * fs));

    std::vector<HeartSoundEvent> events;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        const auto& lp = labeled[i];
        auto p = static_cast<std::size_t>(std::lround(lp.t * fs));
        p = std::min(p, n - 1);

        std::size_t cap_lo = p > side_max ? p - side_max : 0;
        std::size_t cap_hi = std::min(p + side_max, n - 1);
        if (i > 0) {
            const auto prev = static_cast<std::size_t>(std::lround(labeled[i - 1].t * fs));
            cap_lo = std::max(cap_lo, (prev + p) / 2);
        }
        if (i + 1 < labeled.size()) {
            const auto next = static_cast<std::size_t>(std::lround(labeled[i + 1].t * fs));
            cap_hi = std::min(cap_hi, (p + next) / 2);
        }
        if (cap_lo >= p || cap_hi <= p) {
            out.warnings.push_back(to_string(lp.kind) + std::string(" event at ") +
                                   std::to_string(lp.t) + " s squeezed out by neighbors");
            continue;
        }

        const auto& env = lp.kind == SoundKind::S1 ? env1 : env2;
        const double thr = lp.kind == SoundKind::S1 ? thr1 : thr2;
        std::size_t onset = 0, offset = 0;
        if (!detail::find_crossings(env, thr, p, cap_lo, cap_hi, onset, offset)) {
            out.warnings.push_back(std::string("no threshold crossing near ") +
                                   to_string(lp.kind) + " at " + std::to_string(lp.t) +
                                   " s; event dropped");
            continue;
        }

        // clamp the width into [event_min_s, event_max_s]
        if (offset - onset > wmax) {
            const double left = static_cast<double>(p - onset);
            const double width = static_cast<double>(offset - onset);
            auto new_left = static_cast<std::size_t>(
                std::floor(left * static_cast<double>(wmax) / width));
            new_left = std::max<std::size_t>(new_left, 1);
            onset = p - new_left;
            offset = std::min(onset + wmax, cap_hi);
        }
        if (offset - onset < wmin) {
            while (offset - onset < wmin && (onset > cap_lo || offset < cap_hi)) {
                if (onset > cap_lo) --onset;
                if (offset - onset < wmin && offset < cap_hi) ++offset;
            }
            if (offset - onset < wmin) {
                out.warnings.push_back(std::string("event at ") + std::to_string(lp.t) +
                                       " s too narrow after caps; dropped");
                continue;
            }
        }
        if (onset >= p) onset = p - 1;
        if (offset <= p) offset = p + 1;

        HeartSoundEvent ev;
        ev.kind = lp.kind;
        ev.peak_t = lp.t;
        ev.onset_i = onset;
        ev.offset_i = offset;
        ev.onset_t = static_cast<double>(onset) / fs;
        ev.offset_t = static_cast<double>(offset) / fs;
        events.push_back(ev);
    }

    // a dropped event may leave same-kind neighbors; keep the first of each run
    std::vector<HeartSoundEvent> alternating;
    for (const auto& ev : events) {
        if (!alternating.empty() && alternating.back().kind == ev.kind) {
            out.warnings.push_back(std::string("dropped repeated ") + to_string(ev.kind) +
                                   " at " + std::to_string(ev.peak_t) + " s");
            continue;
        }
        alternating.push_back(ev);
    }
    out.events = std::move(alternating);

    // assemble complete S1 -> S2 -> next-S1 cycles
    for (std::size_t i = 0; i + 2 < out.events.size(); ++i) {
        const auto& s1 = out.events[i];
        const auto& s2 = out.events[i + 1];
        const auto& s1n = out.events[i + 2];
        if (s1.kind != SoundKind::S1) continue;

        if (s1.offset_i > s2.onset_i || s2.offset_i > s1n.onset_i) {
            out.warnings.push_back("overlapping event boundaries near " +
                                   std::to_string(s1.peak_t) + " s; cycle skipped");
            continue;
        }
        const std::size_t sys_len = s2.onset_i - s1.offset_i;
        const std::size_t dia_len = s1n.onset_i - s2.offset_i;
        if (sys_len < 3 || dia_len < 3) {
            out.warnings.push_back("degenerate systole/diastole near " +
                                   std::to_string(s1.peak_t) + " s; cycle skipped");
            continue;
        }

        CardiacCycle cyc;
        cyc.s1 = s1;
        cyc.s2 = s2;
        auto thirds = [](std::size_t b, std::size_t e, SampleSpan* dst) {
            const std::size_t len = e - b;
            dst[0] = {b, b + len / 3};
            dst[1] = {b + len / 3, b + 2 * len / 3};
            dst[2] = {b + 2 * len / 3, e};
        };
        cyc.intervals8[0] = {s1.onset_i, s1.offset_i};
        thirds(s1.offset_i, s2.onset_i, &cyc.intervals8[1]);
        cyc.intervals8[4] = {s2.onset_i, s2.offset_i};
        thirds(s2.offset_i, s1n.onset_i, &cyc.intervals8[5]);
        out.cycles.push_back(cyc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// public entry point

inline SegmentationResult segment(const Recording& rec, const SegmentationConfig& cfg = {}) {
    const auto fsig = feature_signal(rec, cfg);
    const auto est = estimate_cycle(fsig, cfg);
    const auto peaks = detect_peaks(fsig, est, cfg);
    const auto labeled = label_events(peaks, fsig, est, cfg);
    return refine_boundaries(rec, labeled, est, cfg);
}

} // namespace phono
