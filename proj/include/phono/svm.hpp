#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "phono/errors.hpp"

namespace phono {

// Cubic polynomial kernel K(x, y) = (x.y / d + 1)^3 with d = dimension.
struct PolyKernel {
    double gamma = 1.0; // 1/d
    double coef0 = 1.0;
    int degree = 3;

    double operator()(const std::vector<double>& a, const std::vector<double>& b) const {
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
        double base = gamma * dot + coef0;
        double r = 1.0;
        for (int k = 0; k < degree; ++k) r *= base;
        return r;
    }
};

struct SvmModel {
    PolyKernel kernel;
    double c = 1.0;
    double bias = 0.0;
    std::vector<std::vector<double>> support_x;
    std::vector<double> support_alpha_y; // alpha_i * y_i, y in {-1,+1}
};

inline double svm_decision(const SvmModel& m, const std::vector<double>& v) {
    double f = m.bias;
    for (std::size_t i = 0; i < m.support_x.size(); ++i)
        f += m.support_alpha_y[i] * m.kernel(m.support_x[i], v);
    return f;
}

// label 1 iff f(v) > 0; score is the decision value.
inline std::pair<int, double> svm_predict(const SvmModel& m, const std::vector<double>& v) {
    const double f = svm_decision(m, v);
    return {f > 0.0 ? 1 : 0, f};
}

namespace detail {

// SMO working state. Deterministic: candidate scans run in fixed index order
// rather than from random starting points.
struct SmoSolver {
    const std::vector<std::vector<double>>& x;
    std::vector<double> y; // -1/+1
    PolyKernel kernel;
    double c, tol;
    std::size_t max_updates;

    std::size_t n = 0;
    std::vector<double> alpha, error;
    std::vector<double> gram;
    double bias = 0.0;
    std::size_t updates = 0;

    SmoSolver(const std::vector<std::vector<double>>& x_, const std::vector<int>& y01,
              PolyKernel k, double c_, double tol_, std::size_t max_updates_)
        : x(x_), kernel(k), c(c_), tol(tol_), max_updates(max_updates_) {
        n = x.size();
        y.resize(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = y01[i] == 1 ? 1.0 : -1.0;
        alpha.assign(n, 0.0);
        gram.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                gram[i * n + j] = gram[j * n + i] = kernel(x[i], x[j]);
        error.resize(n);
        for (std::size_t i = 0; i < n; ++i) error[i] = -y[i]; // f = 0 initially
    }

    double k_at(std::size_t i, std::size_t j) const { return gram[i * n + j]; }

    bool is_bound(std::size_t i) const { return alpha[i] <= 0.0 || alpha[i] >= c; }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha[i1], a2_old = alpha[i2];
        const double y1 = y[i1], y2 = y[i2];
        const double e1 = error[i1], e2 = error[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c, c + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c);
            hi = std::min(c, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        const double k11 = k_at(i1, i1), k12 = k_at(i1, i2), k22 = k_at(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = a2_old + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // evaluate the objective at both clip ends
            const double f1 = y1 * e1 - a1_old * k11 - s * a2_old * k12;
            const double f2 = y2 * e2 - a2_old * k22 - s * a1_old * k12;
            const double l1 = a1_old + s * (a2_old - lo);
            const double h1 = a1_old + s * (a2_old - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                                  s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                                  s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12)
                a2 = lo;
            else if (obj_lo > obj_hi + 1e-12)
                a2 = hi;
            else
                return false;
        }
        if (std::abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;

        const double a1 = a1_old + s * (a2_old - a2);
        const double da1 = a1 - a1_old, da2 = a2 - a2_old;

        const double b1 = bias - e1 - y1 * da1 * k11 - y2 * da2 * k12;
        const double b2 = bias - e2 - y1 * da1 * k12 - y2 * da2 * k22;
        double b_new;
        if (a1 > 0.0 && a1 < c)
            b_new = b1;
        else if (a2 > 0.0 && a2 < c)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        const double db = b_new - bias;
        for (std::size_t i = 0; i < n; ++i)
            error[i] += y1 * da1 * k_at(i1, i) + y2 * da2 * k_at(i2, i) + db;

        alpha[i1] = a1;
        alpha[i2] = a2;
        bias = b_new;
        ++updates;
        return true;
    }

    bool examine(std::size_t i2) {
        const double y2 = y[i2], a2 = alpha[i2], e2 = error[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -tol && a2 < c) || (r2 > tol && a2 > 0.0))) return false;

        // second-choice heuristic: largest |E1 - E2| among non-bound points
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_bound(i)) continue;
            const double gap = std::abs(error[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n && take_step(best, i2)) return true;
        for (std::size_t i = 0; i < n; ++i)
            if (!is_bound(i) && take_step(i, i2)) return true;
        for (std::size_t i = 0; i < n; ++i)
            if (take_step(i, i2)) return true;
        return false;
    }

    // Platt's outer loop: alternate full passes with non-bound-only passes;
    // converged when a full pass changes nothing.
    void solve() {
        bool examine_all = true;
        std::size_t changed = 0;
        while (changed > 0 || examine_all) {
            changed = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!examine_all && is_bound(i)) continue;
                if (examine(i)) ++changed;
                if (updates > max_updates)
                    throw NonConvergence("SMO exceeded " + std::to_string(max_updates) +
                                         " pair updates");
            }
            if (examine_all)
                examine_all = false;
            else if (changed == 0)
                examine_all = true;
        }
    }
};

} // namespace detail

inline SvmModel svm_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          double c = 1.0, double tol = 1e-3,
                          std::size_t max_updates = 1000000) {
    if (x.empty()) throw EmptyTrainSet("SVM needs training vectors");
    bool has0 = false, has1 = false;
    for (int v : y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw SingleClassTrainSet("SVM needs both classes in training data");

    PolyKernel kernel;
    kernel.gamma = 1.0 / static_cast<double>(x.front().size());

    detail::SmoSolver solver(x, y, kernel, c, tol, max_updates);
    solver.solve();

    SvmModel m;
    m.kernel = kernel;
    m.c = c;
    m.bias = solver.bias;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (solver.alpha[i] > 0.0) {
            m.support_x.push_back(x[i]);
            m.support_alpha_y.push_back(solver.alpha[i] * solver.y[i]);
        }
    }
    return m;
}

} // namespace phono
