#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "phono/errors.hpp"
#include "phono/recording.hpp"
#include "phono/synth.hpp"

namespace phono {

// Percentage ratio, undefined (not 0) on a zero denominator.
inline std::optional<double> pct(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

struct ClassStats {
    std::optional<double> sensitivity, precision, specificity; // percent
};

inline ClassStats class_stats(std::int64_t tp, std::int64_t fn, std::int64_t fp,
                              std::int64_t tn) {
    if (tp < 0 || fn < 0 || fp < 0 || tn < 0) throw InvalidParams("negative confusion count");
    return {pct(tp, tp + fn), pct(tp, tp + fp), pct(tn, tn + fp)};
}

// Binary confusion with both per-class views, always recomputable from the
// stored counts.
struct MetricsReport {
    std::array<ClassLabel, 2> classes{ClassLabel::N, ClassLabel::AbN};
    // confusion[i][j]: true class i, predicted class j
    std::array<std::array<std::int64_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};
    std::array<ClassStats, 2> per_class;
    std::optional<double> accuracy; // percent

    std::int64_t total() const {
        return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
    }
};

inline MetricsReport compute_metrics(const std::array<std::array<std::int64_t, 2>, 2>& confusion,
                                     const std::array<ClassLabel, 2>& classes) {
    MetricsReport r;
    r.classes = classes;
    r.confusion = confusion;
    for (std::size_t c = 0; c < 2; ++c) {
        const std::size_t o = 1 - c;
        const std::int64_t tp = confusion[c][c];
        const std::int64_t fn = confusion[c][o];
        const std::int64_t fp = confusion[o][c];
        const std::int64_t tn = confusion[o][o];
        r.per_class[c] = class_stats(tp, fn, fp, tn);
    }
    r.accuracy = pct(confusion[0][0] + confusion[1][1], r.total());
    return r;
}

inline MetricsReport compute_metrics(const std::vector<int>& truth,
                                     const std::vector<int>& predicted,
                                     const std::array<ClassLabel, 2>& classes) {
    std::array<std::array<std::int64_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
    return compute_metrics(confusion, classes);
}

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
    auto opt = [](const std::optional<double>& v) -> nlohmann::json {
        if (v) return *v;
        return nullptr;
    };
    nlohmann::json j;
    j["classes"] = {to_string(r.classes[0]), to_string(r.classes[1])};
    j["confusion"] = {{r.confusion[0][0], r.confusion[0][1]},
                      {r.confusion[1][0], r.confusion[1][1]}};
    for (std::size_t c = 0; c < 2; ++c) {
        j["per_class"][to_string(r.classes[c])] = {
            {"sensitivity", opt(r.per_class[c].sensitivity)},
            {"precision", opt(r.per_class[c].precision)},
            {"specificity", opt(r.per_class[c].specificity)}};
    }
    j["accuracy"] = opt(r.accuracy);
    return j;
}

// --------------------------------------------------------------------------
// segmentation scoring (event-level sensitivity/precision per sound kind)

struct KindScore {
    std::int64_t truth_count = 0;
    std::int64_t detected_count = 0;
    std::int64_t matched = 0;
    std::optional<double> sensitivity; // percent
    std::optional<double> precision;   // percent
};

struct SegScore {
    double tol_s = 0.1;
    KindScore s1, s2;
};

// Greedy closest-first one-to-one matching of detected event times to truth
// times of the same kind, within tol seconds.
inline KindScore score_events(const std::vector<double>& detected,
                              const std::vector<double>& truth, double tol_s) {
    struct Cand {
        double dist;
        std::size_t d, t;
    };
    std::vector<Cand> cands;
    for (std::size_t d = 0; d < detected.size(); ++d)
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const double dist = std::abs(detected[d] - truth[t]);
            if (dist <= tol_s) cands.push_back({dist, d, t});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.d != b.d) return a.d < b.d;
        return a.t < b.t;
    });
    std::vector<char> d_used(detected.size(), 0), t_used(truth.size(), 0);
    KindScore ks;
    ks.truth_count = static_cast<std::int64_t>(truth.size());
    ks.detected_count = static_cast<std::int64_t>(detected.size());
    for (const auto& c : cands) {
        if (d_used[c.d] || t_used[c.t]) continue;
        d_used[c.d] = 1;
        t_used[c.t] = 1;
        ++ks.matched;
    }
    ks.sensitivity = pct(ks.matched, ks.truth_count);
    ks.precision = pct(ks.matched, ks.detected_count);
    return ks;
}

template <typename EventList>
SegScore score_segmentation(const EventList& detected, const std::vector<TruthEvent>& truth,
                            double tol_s = 0.1) {
    std::vector<double> det_s1, det_s2, tru_s1, tru_s2;
    for (const auto& e : detected)
        (e.kind == SoundKind::S1 ? det_s1 : det_s2).push_back(e.peak_t);
    for (const auto& e : truth)
        (e.kind == SoundKind::S1 ? tru_s1 : tru_s2).push_back(e.center_t);
    SegScore s;
    s.tol_s = tol_s;
    s.s1 = score_events(det_s1, tru_s1, tol_s);
    s.s2 = score_events(det_s2, tru_s2, tol_s);
    return s;
}

inline nlohmann::json segscore_to_json(const SegScore& s) {
    auto kind = [](const KindScore& k) {
        nlohmann::json j;
        j["truth"] = k.truth_count;
        j["detected"] = k.detected_count;
        j["matched"] = k.matched;
        j["sensitivity"] = k.sensitivity ? nlohmann::json(*k.sensitivity) : nullptr;
        j["precision"] = k.precision ? nlohmann::json(*k.precision) : nullptr;
        return j;
    };
    return {{"tol_s", s.tol_s}, {"S1", kind(s.s1)}, {"S2", kind(s.s2)}};
}

} // namespace phono
