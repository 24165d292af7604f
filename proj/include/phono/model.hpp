#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "phono/errors.hpp"
#include "phono/features.hpp"
#include "phono/knn.hpp"
#include "phono/mahalanobis.hpp"
#include "phono/mlp.hpp"
#include "phono/recording.hpp"
#include "phono/svm.hpp"

namespace phono {

constexpr int kModelSchemaVersion = 1;

enum class ClassifierKind { KNN, SVM, MLP, Mahalanobis };

inline const char* to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::KNN: return "knn";
        case ClassifierKind::SVM: return "svm";
        case ClassifierKind::MLP: return "mlp";
        case ClassifierKind::Mahalanobis: return "mahalanobis";
    }
    return "?";
}

inline ClassifierKind classifier_kind_from_string(const std::string& s) {
    if (s == "knn") return ClassifierKind::KNN;
    if (s == "svm") return ClassifierKind::SVM;
    if (s == "mlp") return ClassifierKind::MLP;
    if (s == "mahalanobis") return ClassifierKind::Mahalanobis;
    throw InvalidParams("unknown classifier '" + s + "'");
}

struct Prediction {
    ClassLabel label = ClassLabel::N;
    int class_index = 0; // position in class_set
    double score = 0.0;  // kind-specific: vote share, margin, p1-p0, d0^2-d1^2
};

// One trained binary classifier plus the feature normalization fitted on its
// training split. class_set[i] is the label for internal class index i.
struct TrainedModel {
    int schema_version = kModelSchemaVersion;
    ClassifierKind kind = ClassifierKind::KNN;
    std::array<ClassLabel, 2> class_set{ClassLabel::N, ClassLabel::AbN};
    Normalizer normalizer;
    std::variant<KnnModel, SvmModel, MlpModel, MahalanobisModel> params;
};

struct TrainOptions {
    std::size_t knn_k = 5;
    double knn_p = 3.0;
    double svm_c = 1.0;
    double svm_tol = 1e-3;
    std::size_t svm_max_updates = 1000000;
    MlpConfig mlp;
    std::uint64_t seed = 0;
};

// x: raw (unnormalized) feature vectors; y: class indices into class_set.
// The normalizer is fit on x here and applied inside predict.
// x_val/y_val are only used by the MLP's early stopping.
inline TrainedModel train_classifier(ClassifierKind kind,
                                     const std::vector<std::vector<double>>& x,
                                     const std::vector<int>& y,
                                     const std::array<ClassLabel, 2>& class_set,
                                     const std::vector<std::vector<double>>& x_val = {},
                                     const std::vector<int>& y_val = {},
                                     const TrainOptions& opt = {}) {
    TrainedModel m;
    m.kind = kind;
    m.class_set = class_set;
    m.normalizer = fit_normalizer(x);

    std::vector<std::vector<double>> xn(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xn[i] = m.normalizer.apply(x[i]);

    switch (kind) {
        case ClassifierKind::KNN:
            m.params = knn_train(xn, y, opt.knn_k, opt.knn_p);
            break;
        case ClassifierKind::SVM:
            m.params = svm_train(xn, y, opt.svm_c, opt.svm_tol, opt.svm_max_updates);
            break;
        case ClassifierKind::MLP: {
            std::vector<std::vector<double>> vn(x_val.size());
            for (std::size_t i = 0; i < x_val.size(); ++i) vn[i] = m.normalizer.apply(x_val[i]);
            m.params = mlp_train(xn, y, vn, y_val, opt.seed, opt.mlp);
            break;
        }
        case ClassifierKind::Mahalanobis:
            m.params = mahalanobis_train(xn, y);
            break;
    }
    return m;
}

inline Prediction predict(const TrainedModel& m, const std::vector<double>& raw) {
    const auto v = m.normalizer.apply(raw);
    std::pair<int, double> r;
    switch (m.kind) {
        case ClassifierKind::KNN: r = knn_predict(std::get<KnnModel>(m.params), v); break;
        case ClassifierKind::SVM: r = svm_predict(std::get<SvmModel>(m.params), v); break;
        case ClassifierKind::MLP: r = mlp_predict(std::get<MlpModel>(m.params), v); break;
        case ClassifierKind::Mahalanobis:
            r = mahalanobis_predict(std::get<MahalanobisModel>(m.params), v);
            break;
    }
    Prediction p;
    p.class_index = r.first;
    p.score = r.second;
    p.label = m.class_set[static_cast<std::size_t>(r.first)];
    return p;
}

// --------------------------------------------------------------------------
// JSON serialization

inline nlohmann::json model_to_json(const TrainedModel& m) {
    nlohmann::json j;
    j["schema_version"] = m.schema_version;
    j["kind"] = to_string(m.kind);
    j["class_set"] = {to_string(m.class_set[0]), to_string(m.class_set[1])};
    j["normalizer"] = {{"mean", m.normalizer.mean}, {"std", m.normalizer.stddev}};

    nlohmann::json p;
    if (m.kind == ClassifierKind::KNN) {
        const auto& k = std::get<KnnModel>(m.params);
        p = {{"k", k.k},
             {"p", k.p},
             {"k_clamped", k.k_clamped},
             {"train_x", k.train_x},
             {"train_y", k.train_y}};
    } else if (m.kind == ClassifierKind::SVM) {
        const auto& s = std::get<SvmModel>(m.params);
        p = {{"gamma", s.kernel.gamma}, {"coef0", s.kernel.coef0},
             {"degree", s.kernel.degree}, {"c", s.c},
             {"bias", s.bias},           {"support_x", s.support_x},
             {"support_alpha_y", s.support_alpha_y}};
    } else if (m.kind == ClassifierKind::MLP) {
        const auto& n = std::get<MlpModel>(m.params);
        p["layers"] = nlohmann::json::array();
        for (const auto& l : n.layers)
            p["layers"].push_back({{"in", l.in}, {"out", l.out}, {"w", l.w}, {"b", l.b}});
    } else {
        const auto& h = std::get<MahalanobisModel>(m.params);
        p = {{"dim", h.dim},
             {"mean0", h.means[0]},
             {"mean1", h.means[1]},
             {"cov_inv", h.cov_inv}};
    }
    j["params"] = std::move(p);
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kModelSchemaVersion)
        throw SchemaMismatch("expected schema_version " + std::to_string(kModelSchemaVersion));

    TrainedModel m;
    m.schema_version = kModelSchemaVersion;
    m.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    m.class_set[0] = class_label_from_string(j.at("class_set").at(0).get<std::string>());
    m.class_set[1] = class_label_from_string(j.at("class_set").at(1).get<std::string>());
    m.normalizer.mean = j.at("normalizer").at("mean").get<std::vector<double>>();
    m.normalizer.stddev = j.at("normalizer").at("std").get<std::vector<double>>();

    const auto& p = j.at("params");
    if (m.kind == ClassifierKind::KNN) {
        KnnModel k;
        k.k = p.at("k").get<std::size_t>();
        k.p = p.at("p").get<double>();
        k.k_clamped = p.at("k_clamped").get<bool>();
        k.train_x = p.at("train_x").get<std::vector<std::vector<double>>>();
        k.train_y = p.at("train_y").get<std::vector<int>>();
        m.params = std::move(k);
    } else if (m.kind == ClassifierKind::SVM) {
        SvmModel s;
        s.kernel.gamma = p.at("gamma").get<double>();
        s.kernel.coef0 = p.at("coef0").get<double>();
        s.kernel.degree = p.at("degree").get<int>();
        s.c = p.at("c").get<double>();
        s.bias = p.at("bias").get<double>();
        s.support_x = p.at("support_x").get<std::vector<std::vector<double>>>();
        s.support_alpha_y = p.at("support_alpha_y").get<std::vector<double>>();
        m.params = std::move(s);
    } else if (m.kind == ClassifierKind::MLP) {
        MlpModel n;
        const auto& layers = p.at("layers");
        for (std::size_t i = 0; i < 3; ++i) {
            auto& l = n.layers[i];
            l.in = layers.at(i).at("in").get<std::size_t>();
            l.out = layers.at(i).at("out").get<std::size_t>();
            l.w = layers.at(i).at("w").get<std::vector<double>>();
            l.b = layers.at(i).at("b").get<std::vector<double>>();
        }
        m.params = std::move(n);
    } else {
        MahalanobisModel h;
        h.dim = p.at("dim").get<std::size_t>();
        h.means[0] = p.at("mean0").get<std::vector<double>>();
        h.means[1] = p.at("mean1").get<std::vector<double>>();
        h.cov_inv = p.at("cov_inv").get<std::vector<double>>();
        m.params = std::move(h);
    }
    return m;
}

} // namespace phono
