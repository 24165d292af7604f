#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

// Minkowski distance (sum |dx|^p)^(1/p).
inline double minkowski(const std::vector<double>& a, const std::vector<double>& b, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(acc, 1.0 / p);
}

struct KnnModel {
    std::size_t k = 5;
    double p = 3.0;
    bool k_clamped = false; // k was reduced to the training-set size
    std::vector<std::vector<double>> train_x;
    std::vector<int> train_y; // 0/1
};

inline KnnModel knn_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          std::size_t k = 5, double p = 3.0) {
    if (x.empty()) throw EmptyTrainSet("k-NN needs at least one training vector");
    KnnModel m;
    m.k = k;
    m.p = p;
    if (m.k > x.size()) {
        m.k = x.size();
        m.k_clamped = true;
    }
    m.train_x = x;
    m.train_y = y;
    return m;
}

// Majority vote among the k nearest. Ties break toward the class with the
// smaller mean distance among its voters, then toward class 0.
// Score: (votes_1 - votes_0) / k.
inline std::pair<int, double> knn_predict(const KnnModel& m, const std::vector<double>& v) {
    struct Neighbor {
        double dist;
        std::size_t idx;
    };
    std::vector<Neighbor> nb(m.train_x.size());
    for (std::size_t i = 0; i < m.train_x.size(); ++i)
        nb[i] = {minkowski(m.train_x[i], v, m.p), i};
    std::partial_sort(nb.begin(), nb.begin() + static_cast<std::ptrdiff_t>(m.k), nb.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                          if (a.dist != b.dist) return a.dist < b.dist;
                          return a.idx < b.idx;
                      });

    std::size_t votes[2] = {0, 0};
    double dist_sum[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < m.k; ++j) {
        const int cls = m.train_y[nb[j].idx];
        ++votes[cls];
        dist_sum[cls] += nb[j].dist;
    }

    int label;
    if (votes[0] != votes[1]) {
        label = votes[1] > votes[0] ? 1 : 0;
    } else if (votes[0] == 0) {
        label = 0;
    } else {
        const double mean0 = dist_sum[0] / static_cast<double>(votes[0]);
        const double mean1 = dist_sum[1] / static_cast<double>(votes[1]);
        label = mean1 < mean0 ? 1 : 0;
    }
    const double score = (static_cast<double>(votes[1]) - static_cast<double>(votes[0])) /
                         static_cast<double>(m.k);
    return {label, score};
}

} // namespace phono
