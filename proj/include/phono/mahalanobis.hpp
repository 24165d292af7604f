#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

namespace detail {

// Cholesky factorization A = L L^T of a symmetric positive-definite matrix
// (row-major d x d). Throws on a non-positive pivot.
inline std::vector<double> cholesky(const std::vector<double>& a, std::size_t d) {
    std::vector<double> l(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i * d + k] * l[j * d + k];
            if (i == j) {
                if (sum <= 0.0) throw Error("covariance not positive definite");
                l[i * d + i] = std::sqrt(sum);
            } else {
                l[i * d + j] = sum / l[j * d + j];
            }
        }
    }
    return l;
}

// Inverse from the Cholesky factor: A^-1 = L^-T L^-1.
inline std::vector<double> cholesky_inverse(const std::vector<double>& l, std::size_t d) {
    // forward-substitute columns of the identity, then back-substitute
    std::vector<double> inv(d * d, 0.0);
    std::vector<double> col(d);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < d; ++i) {
            double sum = (i == c) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) sum -= l[i * d + k] * col[k];
            col[i] = sum / l[i * d + i];
        }
        for (std::size_t ii = d; ii-- > 0;) {
            double sum = col[ii];
            for (std::size_t k = ii + 1; k < d; ++k) sum -= l[k * d + ii] * inv[k * d + c];
            inv[ii * d + c] = sum / l[ii * d + ii];
        }
    }
    return inv;
}

} // namespace detail

// Nearest-class-mean under the pooled-covariance Mahalanobis metric.
struct MahalanobisModel {
    std::size_t dim = 0;
    std::array<std::vector<double>, 2> means;
    std::vector<double> cov_inv; // regularized pooled inverse, row-major
};

inline MahalanobisModel mahalanobis_train(const std::vector<std::vector<double>>& x,
                                          const std::vector<int>& y) {
    if (x.empty()) throw EmptyTrainSet("Mahalanobis needs training vectors");
    const std::size_t d = x.front().size();
    std::array<std::size_t, 2> counts{0, 0};
    for (int v : y) ++counts[static_cast<std::size_t>(v)];
    if (counts[0] < 2 || counts[1] < 2)
        throw InsufficientClassData("need at least 2 examples per class, have " +
                                    std::to_string(counts[0]) + " and " +
                                    std::to_string(counts[1]));

    MahalanobisModel m;
    m.dim = d;
    m.means[0].assign(d, 0.0);
    m.means[1].assign(d, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            m.means[static_cast<std::size_t>(y[i])][j] += x[i][j];
    for (int c = 0; c < 2; ++c)
        for (auto& v : m.means[static_cast<std::size_t>(c)])
            v /= static_cast<double>(counts[static_cast<std::size_t>(c)]);

    // pooled within-class covariance, regularized by lambda I
    std::vector<double> cov(d * d, 0.0);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& mu = m.means[static_cast<std::size_t>(y[i])];
        for (std::size_t j = 0; j < d; ++j) diff[j] = x[i][j] - mu[j];
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = r; c < d; ++c) cov[r * d + c] += diff[r] * diff[c];
    }
    const double denom = static_cast<double>(x.size() - 2);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = r; c < d; ++c) {
            cov[r * d + c] /= denom;
            cov[c * d + r] = cov[r * d + c];
        }

    double trace = 0.0;
    for (std::size_t j = 0; j < d; ++j) trace += cov[j * d + j];
    const double lambda = 1e-6 * trace / static_cast<double>(d);
    for (std::size_t j = 0; j < d; ++j) cov[j * d + j] += lambda;

    const auto l = detail::cholesky(cov, d);
    m.cov_inv = detail::cholesky_inverse(l, d);
    return m;
}

inline double mahalanobis_sq(const MahalanobisModel& m, const std::vector<double>& v, int cls) {
    const auto& mu = m.means[static_cast<std::size_t>(cls)];
    const std::size_t d = m.dim;
    double acc = 0.0;
    std::vector<double> diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = v[j] - mu[j];
    for (std::size_t r = 0; r < d; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < d; ++c) row += m.cov_inv[r * d + c] * diff[c];
        acc += diff[r] * row;
    }
    return acc;
}

// label = class with the smaller squared distance (ties to class 0);
// score = d0^2 - d1^2.
inline std::pair<int, double> mahalanobis_predict(const MahalanobisModel& m,
                                                  const std::vector<double>& v) {
    const double d0 = mahalanobis_sq(m, v, 0);
    const double d1 = mahalanobis_sq(m, v, 1);
    return {d1 < d0 ? 1 : 0, d0 - d1};
}

} // namespace phono
