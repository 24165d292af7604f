#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

// Diagnostic class of a recording or cardiac cycle. AbN is the level-1
// aggregate of AS and MI; Unlabeled marks corpus entries without a manifest row.
enum class ClassLabel { N, AbN, AS, MI, Unlabeled };

inline const char* to_string(ClassLabel l) {
    switch (l) {
        case ClassLabel::N: return "N";
        case ClassLabel::AbN: return "abN";
        case ClassLabel::AS: return "AS";
        case ClassLabel::MI: return "MI";
        case ClassLabel::Unlabeled: return "unlabeled";
    }
    return "?";
}

inline ClassLabel class_label_from_string(const std::string& s) {
    if (s == "N") return ClassLabel::N;
    if (s == "abN") return ClassLabel::AbN;
    if (s == "AS") return ClassLabel::AS;
    if (s == "MI") return ClassLabel::MI;
    if (s == "unlabeled" || s.empty()) return ClassLabel::Unlabeled;
    throw InvalidParams("unknown class label '" + s + "'");
}

// Maps a ground-truth label onto the level-1 task (N vs abN).
inline ClassLabel to_level1(ClassLabel l) {
    return (l == ClassLabel::AS || l == ClassLabel::MI || l == ClassLabel::AbN)
               ? ClassLabel::AbN
               : ClassLabel::N;
}

// Uniformly sampled mono PCG signal.
struct Recording {
    std::vector<double> samples;
    int sample_rate = 0; // Hz
    std::optional<ClassLabel> label;
    std::string id;

    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

} // namespace phono
