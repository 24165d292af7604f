#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "phono/errors.hpp"
#include "phono/recording.hpp"
#include "phono/rng.hpp"

namespace phono {

struct SplitFractions {
    double train = 0.70;
    double validation = 0.0;
    double test = 0.30;
};

struct Split {
    std::vector<std::size_t> train, validation, test;
    std::uint64_t seed = 0;
};

// Stratified per-class split. Classes are visited in a fixed label order and
// shuffled with one seeded generator; per-class counts follow the largest
// remainder rule so every class lands within one item of its target fraction.
inline Split stratified_split(const std::vector<ClassLabel>& labels, SplitFractions f,
                              std::uint64_t seed) {
    if (std::abs(f.train + f.validation + f.test - 1.0) > 1e-9)
        throw InvalidParams("split fractions must sum to 1");

    Split split;
    split.seed = seed;
    Rng rng(seed);

    for (ClassLabel cls : {ClassLabel::N, ClassLabel::AbN, ClassLabel::AS, ClassLabel::MI,
                           ClassLabel::Unlabeled}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(i);
        if (idx.empty()) continue;
        if (idx.size() < 3)
            throw ClassTooSmall(std::string(to_string(cls)) + " has only " +
                                std::to_string(idx.size()) + " cycles (need >= 3)");
        rng.shuffle(idx);

        const auto n = static_cast<double>(idx.size());
        const double want[3] = {f.train * n, f.validation * n, f.test * n};
        std::size_t take[3];
        double frac[3];
        std::size_t total = 0;
        for (int j = 0; j < 3; ++j) {
            take[j] = static_cast<std::size_t>(std::floor(want[j]));
            frac[j] = want[j] - std::floor(want[j]);
            total += take[j];
        }
        while (total < idx.size()) {
            int best = 0;
            for (int j = 1; j < 3; ++j)
                if (frac[j] > frac[best]) best = j;
            ++take[best];
            frac[best] = -1.0;
            ++total;
        }

        std::size_t pos = 0;
        for (std::size_t j = 0; j < take[0]; ++j) split.train.push_back(idx[pos++]);
        for (std::size_t j = 0; j < take[1]; ++j) split.validation.push_back(idx[pos++]);
        for (std::size_t j = 0; j < take[2]; ++j) split.test.push_back(idx[pos++]);
    }
    return split;
}

} // namespace phono
