#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "phono/errors.hpp"
#include "phono/rng.hpp"

namespace phono {

struct MlpConfig {
    std::size_t hidden1 = 19;
    std::size_t hidden2 = 11;
    double learning_rate = 0.01;
    double momentum = 0.9;
    double weight_decay = 3e-3; // L2 penalty on weights (biases exempt)
    std::size_t batch_size = 32;
    std::size_t max_epochs = 500;
    std::size_t patience = 25; // epochs without validation improvement
};

// Fully connected network input -> hidden1 -> hidden2 -> 2 with tanh hidden
// activations and a softmax output trained on cross-entropy.
struct MlpModel {
    struct Layer {
        std::size_t in = 0, out = 0;
        std::vector<double> w; // out x in, row-major
        std::vector<double> b;
    };
    std::array<Layer, 3> layers;

    std::size_t input_dim() const { return layers[0].in; }
};

namespace detail {

inline void affine(const MlpModel::Layer& l, const std::vector<double>& x,
                   std::vector<double>& out) {
    out.resize(l.out);
    for (std::size_t r = 0; r < l.out; ++r) {
        double acc = l.b[r];
        const double* w = l.w.data() + r * l.in;
        for (std::size_t c = 0; c < l.in; ++c) acc += w[c] * x[c];
        out[r] = acc;
    }
}

inline void softmax_inplace(std::vector<double>& z) {
    double mx = z[0];
    for (double v : z) mx = std::max(mx, v);
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (auto& v : z) v /= sum;
}

struct ForwardPass {
    std::vector<double> h1, h2, probs;
};

inline ForwardPass mlp_forward_pass(const MlpModel& m, const std::vector<double>& x) {
    ForwardPass fp;
    affine(m.layers[0], x, fp.h1);
    for (auto& v : fp.h1) v = std::tanh(v);
    affine(m.layers[1], fp.h1, fp.h2);
    for (auto& v : fp.h2) v = std::tanh(v);
    affine(m.layers[2], fp.h2, fp.probs);
    softmax_inplace(fp.probs);
    return fp;
}

} // namespace detail

inline std::vector<double> mlp_forward(const MlpModel& m, const std::vector<double>& x) {
    return detail::mlp_forward_pass(m, x).probs;
}

// label 1 iff p1 > p0; score = p1 - p0.
inline std::pair<int, double> mlp_predict(const MlpModel& m, const std::vector<double>& x) {
    const auto p = mlp_forward(m, x);
    return {p[1] > p[0] ? 1 : 0, p[1] - p[0]};
}

// Mean cross-entropy over a batch plus 0.5 * decay * sum(w^2) over the
// weight matrices (biases exempt).
inline double mlp_loss(const MlpModel& m, const std::vector<std::vector<double>>& x,
                       const std::vector<int>& y, double decay = 0.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = mlp_forward(m, x[i]);
        acc += -std::log(std::max(p[static_cast<std::size_t>(y[i])], 1e-300));
    }
    double loss = acc / static_cast<double>(x.size());
    if (decay > 0.0) {
        double w2 = 0.0;
        for (const auto& l : m.layers)
            for (double w : l.w) w2 += w * w;
        loss += 0.5 * decay * w2;
    }
    return loss;
}

inline std::vector<double> mlp_flatten(const MlpModel& m) {
    std::vector<double> out;
    for (const auto& l : m.layers) {
        out.insert(out.end(), l.w.begin(), l.w.end());
        out.insert(out.end(), l.b.begin(), l.b.end());
    }
    return out;
}

inline void mlp_unflatten(MlpModel& m, const std::vector<double>& flat) {
    std::size_t pos = 0;
    for (auto& l : m.layers) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() + static_cast<std::ptrdiff_t>(pos + l.w.size()), l.w.begin());
        pos += l.w.size();
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() + static_cast<std::ptrdiff_t>(pos + l.b.size()), l.b.begin());
        pos += l.b.size();
    }
}

// Analytic gradient of mlp_loss over the batch, flattened in the same order
// as mlp_flatten.
inline std::vector<double> mlp_gradient(const MlpModel& m,
                                        const std::vector<std::vector<double>>& x,
                                        const std::vector<int>& y, double decay = 0.0) {
    MlpModel grad = m;
    for (auto& l : grad.layers) {
        std::fill(l.w.begin(), l.w.end(), 0.0);
        std::fill(l.b.begin(), l.b.end(), 0.0);
    }

    std::vector<double> dz, dh2, dpre2, dh1, dpre1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto fp = detail::mlp_forward_pass(m, x[i]);

        dz = fp.probs; // softmax + CE: dL/dz = p - onehot(y)
        dz[static_cast<std::size_t>(y[i])] -= 1.0;

        const auto& l3 = m.layers[2];
        for (std::size_t r = 0; r < l3.out; ++r) {
            for (std::size_t c = 0; c < l3.in; ++c)
                grad.layers[2].w[r * l3.in + c] += dz[r] * fp.h2[c];
            grad.layers[2].b[r] += dz[r];
        }
        dh2.assign(l3.in, 0.0);
        for (std::size_t r = 0; r < l3.out; ++r)
            for (std::size_t c = 0; c < l3.in; ++c) dh2[c] += l3.w[r * l3.in + c] * dz[r];
        dpre2 = dh2;
        for (std::size_t c = 0; c < dpre2.size(); ++c) dpre2[c] *= 1.0 - fp.h2[c] * fp.h2[c];

        const auto& l2 = m.layers[1];
        for (std::size_t r = 0; r < l2.out; ++r) {
            for (std::size_t c = 0; c < l2.in; ++c)
                grad.layers[1].w[r * l2.in + c] += dpre2[r] * fp.h1[c];
            grad.layers[1].b[r] += dpre2[r];
        }
        dh1.assign(l2.in, 0.0);
        for (std::size_t r = 0; r < l2.out; ++r)
            for (std::size_t c = 0; c < l2.in; ++c) dh1[c] += l2.w[r * l2.in + c] * dpre2[r];
        dpre1 = dh1;
        for (std::size_t c = 0; c < dpre1.size(); ++c) dpre1[c] *= 1.0 - fp.h1[c] * fp.h1[c];

        const auto& l1 = m.layers[0];
        for (std::size_t r = 0; r < l1.out; ++r) {
            for (std::size_t c = 0; c < l1.in; ++c)
                grad.layers[0].w[r * l1.in + c] += dpre1[r] * x[i][c];
            grad.layers[0].b[r] += dpre1[r];
        }
    }

    auto flat = mlp_flatten(grad);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (auto& g : flat) g *= inv;
    if (decay > 0.0) {
        std::size_t pos = 0;
        for (const auto& l : m.layers) {
            for (std::size_t i = 0; i < l.w.size(); ++i) flat[pos + i] += decay * l.w[i];
            pos += l.w.size() + l.b.size();
        }
    }
    return flat;
}

inline MlpModel mlp_init(std::size_t input_dim, std::uint64_t seed, const MlpConfig& cfg = {}) {
    MlpModel m;
    const std::size_t dims[4] = {input_dim, cfg.hidden1, cfg.hidden2, 2};
    Rng rng(seed);
    for (std::size_t l = 0; l < 3; ++l) {
        auto& layer = m.layers[l];
        layer.in = dims[l];
        layer.out = dims[l + 1];
        layer.w.resize(layer.out * layer.in);
        layer.b.assign(layer.out, 0.0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
        for (auto& w : layer.w) w = rng.uniform(-bound, bound);
    }
    return m;
}

// Mini-batch gradient descent with momentum and early stopping on the
// validation loss (best-validation weights retained).
inline MlpModel mlp_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          const std::vector<std::vector<double>>& x_val,
                          const std::vector<int>& y_val, std::uint64_t seed,
                          const MlpConfig& cfg = {}) {
    if (x.empty()) throw EmptyTrainSet("MLP needs training vectors");
    if (x_val.empty()) throw EmptyValidationSet("MLP early stopping needs validation data");
    bool has0 = false, has1 = false;
    for (int v : y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw SingleClassTrainSet("MLP needs both classes in training data");

    MlpModel m = mlp_init(x.front().size(), seed, cfg);
    Rng rng(seed ^ 0x5DEECE66DULL);

    auto velocity = mlp_flatten(m);
    std::fill(velocity.begin(), velocity.end(), 0.0);

    MlpModel best = m;
    double best_val = mlp_loss(m, x_val, y_val);
    std::size_t bad_epochs = 0;

    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<std::vector<double>> bx;
    std::vector<int> by;
    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            bx.clear();
            by.clear();
            for (std::size_t i = start; i < end; ++i) {
                bx.push_back(x[order[i]]);
                by.push_back(y[order[i]]);
            }
            const auto grad = mlp_gradient(m, bx, by, cfg.weight_decay);
            auto flat = mlp_flatten(m);
            for (std::size_t i = 0; i < flat.size(); ++i) {
                velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * grad[i];
                flat[i] += velocity[i];
            }
            mlp_unflatten(m, flat);
        }

        const double val = mlp_loss(m, x_val, y_val);
        if (!std::isfinite(val)) throw DivergentLoss("validation loss became non-finite");
        if (val < best_val) {
            best_val = val;
            best = m;
            bad_epochs = 0;
        } else if (++bad_epochs >= cfg.patience) {
            break;
        }
    }
    return best;
}

} // namespace phono
