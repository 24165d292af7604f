#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "phono/errors.hpp"
#include "phono/framing.hpp"
#include "phono/mel.hpp"
#include "phono/recording.hpp"
#include "phono/segmentation.hpp"
#include "phono/stats.hpp"

namespace phono {

enum class FeatureLayout { TD40, CEP60, FULL100 };

inline const char* to_string(FeatureLayout l) {
    switch (l) {
        case FeatureLayout::TD40: return "td40";
        case FeatureLayout::CEP60: return "cep60";
        case FeatureLayout::FULL100: return "full100";
    }
    return "?";
}

inline FeatureLayout feature_layout_from_string(const std::string& s) {
    if (s == "td40") return FeatureLayout::TD40;
    if (s == "cep60") return FeatureLayout::CEP60;
    if (s == "full100") return FeatureLayout::FULL100;
    throw InvalidParams("unknown feature layout '" + s + "'");
}

inline std::size_t layout_length(FeatureLayout l) {
    switch (l) {
        case FeatureLayout::TD40: return 40;
        case FeatureLayout::CEP60: return 60;
        case FeatureLayout::FULL100: return 100;
    }
    return 0;
}

struct FeatureVector {
    std::vector<double> values;
    FeatureLayout layout = FeatureLayout::TD40;
    std::string recording_id;
    std::size_t cycle_index = 0;
    std::optional<ClassLabel> label;
};

struct FeatureConfig {
    std::size_t mel_bands = 26;
    std::size_t n_mfcc = 12;
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    std::size_t n_fft = 256;
    double f_min_hz = 5.0;
    double f_max_hz = 700.0;
};

// Five statistics per interval in the canonical order
// [S1, sys1, sys2, sys3, S2, dia1, dia2, dia3] x [rms, variance, energy,
// kurtosis, dynamic] -> 40 values.
inline FeatureVector time_domain_features(const Recording& rec, const CardiacCycle& cycle,
                                          std::size_t cycle_index = 0) {
    FeatureVector fv;
    fv.layout = FeatureLayout::TD40;
    fv.recording_id = rec.id;
    fv.cycle_index = cycle_index;
    fv.label = rec.label;
    fv.values.reserve(40);
    for (const auto& span : cycle.intervals8) {
        if (span.end <= span.begin || span.end > rec.samples.size())
            throw EmptyInterval("cycle interval outside recording " + rec.id);
        const auto s = stats5(
            std::span<const double>(rec.samples.data() + span.begin, span.length()));
        for (double v : s.as_array()) fv.values.push_back(v);
    }
    return fv;
}

// Per-coefficient statistics of the MFCC trajectories across the frames of a
// full cycle: (c1 stats, c2 stats, ..., c12 stats) -> 60 values.
inline FeatureVector cepstral_features(const Recording& rec, const CardiacCycle& cycle,
                                       std::size_t cycle_index = 0,
                                       const FeatureConfig& cfg = {}) {
    const int fs = rec.sample_rate;
    const std::size_t begin = cycle.intervals8.front().begin;
    const std::size_t end = cycle.intervals8.back().end;
    const auto frame_len = static_cast<std::size_t>(std::lround(cfg.frame_ms * 1e-3 * fs));
    const auto hop = static_cast<std::size_t>(std::lround(cfg.hop_ms * 1e-3 * fs));

    if (end <= begin || end > rec.samples.size())
        throw EmptyInterval("cycle span outside recording " + rec.id);
    const std::size_t span = end - begin;
    if (span < frame_len + 2 * hop)
        throw CycleTooShort("cycle of " + std::to_string(span) + " samples holds fewer than 3 frames");

    const auto frames = frame_signal(
        std::span<const double>(rec.samples.data() + begin, span), frame_len, hop, fs);
    const auto fb = build_mel_filterbank(cfg.mel_bands, cfg.n_fft, fs, cfg.f_min_hz, cfg.f_max_hz);

    // trajectories[c][k]: coefficient c+1 at frame k
    std::vector<std::vector<double>> traj(cfg.n_mfcc,
                                          std::vector<double>(frames.grid.n_frames));
    for (std::size_t k = 0; k < frames.grid.n_frames; ++k) {
        const auto c = mfcc_frame(frames.frame(k), fb, cfg.n_mfcc);
        for (std::size_t j = 0; j < cfg.n_mfcc; ++j) traj[j][k] = c[j];
    }

    FeatureVector fv;
    fv.layout = FeatureLayout::CEP60;
    fv.recording_id = rec.id;
    fv.cycle_index = cycle_index;
    fv.label = rec.label;
    fv.values.reserve(5 * cfg.n_mfcc);
    for (std::size_t j = 0; j < cfg.n_mfcc; ++j) {
        const auto s = stats5(traj[j]);
        for (double v : s.as_array()) fv.values.push_back(v);
    }
    return fv;
}

// TD40 ++ CEP60.
inline FeatureVector full_features(const Recording& rec, const CardiacCycle& cycle,
                                   std::size_t cycle_index = 0, const FeatureConfig& cfg = {}) {
    auto td = time_domain_features(rec, cycle, cycle_index);
    const auto cep = cepstral_features(rec, cycle, cycle_index, cfg);
    td.layout = FeatureLayout::FULL100;
    td.values.insert(td.values.end(), cep.values.begin(), cep.values.end());
    return td;
}

inline FeatureVector extract_features(const Recording& rec, const CardiacCycle& cycle,
                                      FeatureLayout layout, std::size_t cycle_index = 0,
                                      const FeatureConfig& cfg = {}) {
    switch (layout) {
        case FeatureLayout::TD40: return time_domain_features(rec, cycle, cycle_index);
        case FeatureLayout::CEP60: return cepstral_features(rec, cycle, cycle_index, cfg);
        case FeatureLayout::FULL100: return full_features(rec, cycle, cycle_index, cfg);
    }
    throw InvalidParams("bad layout");
}

// Per-dimension z-score statistics, fit on training data only.
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stddev; // floored at 1e-9

    std::vector<double> apply(const std::vector<double>& v) const {
        if (v.size() != mean.size())
            throw LayoutMismatch("vector of " + std::to_string(v.size()) +
                                 " dims vs normalizer of " + std::to_string(mean.size()));
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean[i]) / stddev[i];
        return out;
    }
};

inline Normalizer fit_normalizer(const std::vector<std::vector<double>>& train) {
    if (train.size() < 2) throw LayoutMismatch("need at least 2 training vectors");
    const std::size_t d = train.front().size();
    for (const auto& v : train)
        if (v.size() != d) throw LayoutMismatch("inconsistent training vector lengths");

    Normalizer nrm;
    nrm.mean.assign(d, 0.0);
    nrm.stddev.assign(d, 0.0);
    const auto n = static_cast<double>(train.size());
    for (const auto& v : train)
        for (std::size_t i = 0; i < d; ++i) nrm.mean[i] += v[i];
    for (auto& m : nrm.mean) m /= n;
    for (const auto& v : train)
        for (std::size_t i = 0; i < d; ++i) {
            const double dv = v[i] - nrm.mean[i];
            nrm.stddev[i] += dv * dv;
        }
    for (auto& s : nrm.stddev) s = std::max(std::sqrt(s / n), 1e-9);
    return nrm;
}

} // namespace phono
