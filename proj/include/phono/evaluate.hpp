#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phono/errors.hpp"
#include "phono/metrics.hpp"
#include "phono/model.hpp"
#include "phono/split.hpp"
#include "phono/table.hpp"

namespace phono {

enum class Level { L1 = 1, L2 = 2 };

// Cycle rows mapped onto one binary task: L1 relabels AS/MI as abN;
// L2 keeps only the true-abnormal cycles with their AS/MI labels.
struct TaskView {
    std::array<ClassLabel, 2> class_set;
    std::vector<std::size_t> row_indices; // into the source table
    std::vector<ClassLabel> labels;       // task-level label per kept row
};

inline TaskView task_view(const FeatureTable& table, Level level) {
    TaskView view;
    if (level == Level::L1) {
        view.class_set = {ClassLabel::N, ClassLabel::AbN};
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const ClassLabel l = table.rows[i].label;
            if (l == ClassLabel::Unlabeled) continue;
            view.row_indices.push_back(i);
            view.labels.push_back(to_level1(l));
        }
    } else {
        view.class_set = {ClassLabel::AS, ClassLabel::MI};
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const ClassLabel l = table.rows[i].label;
            if (l != ClassLabel::AS && l != ClassLabel::MI) continue;
            view.row_indices.push_back(i);
            view.labels.push_back(l);
        }
    }
    return view;
}

struct CyclePrediction {
    std::string id;
    std::size_t cycle_index = 0;
    ClassLabel truth = ClassLabel::Unlabeled;
    ClassLabel predicted = ClassLabel::Unlabeled;
    double score = 0.0;
};

struct LevelRun {
    Level level = Level::L1;
    ClassifierKind kind = ClassifierKind::KNN;
    std::uint64_t seed = 0;
    MetricsReport cycle_metrics;
    MetricsReport recording_metrics; // majority vote over each recording's cycles
    std::vector<CyclePrediction> predictions;
    TrainedModel model;
};

// Train on the stratified split and evaluate on the held-out test cycles.
// The MLP reserves 15% for early-stopping validation; the other classifiers
// use the plain 70/30 split.
inline LevelRun run_level(const FeatureTable& table, Level level, ClassifierKind kind,
                          std::uint64_t seed, const TrainOptions& base_opt = {}) {
    const auto view = task_view(table, level);
    if (view.row_indices.empty())
        throw ClassTooSmall("no labeled cycles for level " +
                            std::to_string(static_cast<int>(level)));

    const SplitFractions fractions = kind == ClassifierKind::MLP
                                         ? SplitFractions{0.70, 0.15, 0.15}
                                         : SplitFractions{0.70, 0.0, 0.30};
    const auto split = stratified_split(view.labels, fractions, seed);

    auto class_index = [&](ClassLabel l) { return l == view.class_set[1] ? 1 : 0; };
    auto gather_x = [&](const std::vector<std::size_t>& idx) {
        std::vector<std::vector<double>> x;
        x.reserve(idx.size());
        for (std::size_t i : idx) x.push_back(table.rows[view.row_indices[i]].values);
        return x;
    };
    auto gather_y = [&](const std::vector<std::size_t>& idx) {
        std::vector<int> y;
        y.reserve(idx.size());
        for (std::size_t i : idx) y.push_back(class_index(view.labels[i]));
        return y;
    };

    TrainOptions opt = base_opt;
    opt.seed = seed;

    LevelRun run;
    run.level = level;
    run.kind = kind;
    run.seed = seed;
    run.model = train_classifier(kind, gather_x(split.train), gather_y(split.train),
                                 view.class_set, gather_x(split.validation),
                                 gather_y(split.validation), opt);

    std::vector<int> truth, predicted;
    for (std::size_t i : split.test) {
        const auto& row = table.rows[view.row_indices[i]];
        const auto p = predict(run.model, row.values);
        truth.push_back(class_index(view.labels[i]));
        predicted.push_back(p.class_index);
        run.predictions.push_back({row.id, row.cycle_index, view.labels[i], p.label, p.score});
    }
    run.cycle_metrics = compute_metrics(truth, predicted, view.class_set);

    // recording-level majority vote over the test cycles of each recording
    std::map<std::string, std::array<std::int64_t, 2>> votes;
    std::map<std::string, int> rec_truth;
    for (std::size_t j = 0; j < run.predictions.size(); ++j) {
        const auto& p = run.predictions[j];
        votes.try_emplace(p.id, std::array<std::int64_t, 2>{0, 0});
        ++votes[p.id][static_cast<std::size_t>(class_index(p.predicted))];
        rec_truth[p.id] = class_index(p.truth);
    }
    std::vector<int> rt, rp;
    for (const auto& [id, v] : votes) {
        rt.push_back(rec_truth[id]);
        rp.push_back(v[1] > v[0] ? 1 : 0);
    }
    run.recording_metrics = compute_metrics(rt, rp, view.class_set);
    return run;
}

// Cascaded end-to-end evaluation: level-2 applied to the cycles the level-1
// model called abnormal. Emits a 3-class confusion over {N, AS, MI}.
struct CascadeRun {
    std::uint64_t seed = 0;
    std::array<std::array<std::int64_t, 3>, 3> confusion{}; // truth x predicted
    std::optional<double> accuracy;
};

inline CascadeRun run_cascade(const FeatureTable& table, ClassifierKind kind_l1,
                              ClassifierKind kind_l2, std::uint64_t seed,
                              const TrainOptions& opt = {}) {
    const auto l1 = run_level(table, Level::L1, kind_l1, seed, opt);
    const auto l2 = run_level(table, Level::L2, kind_l2, seed, opt);

    auto three_index = [](ClassLabel l) {
        if (l == ClassLabel::N) return 0;
        if (l == ClassLabel::AS) return 1;
        return 2; // MI
    };

    CascadeRun c;
    c.seed = seed;
    std::int64_t correct = 0, total = 0;
    std::map<std::pair<std::string, std::size_t>, const FeatureTable::Row*> by_key;
    for (const auto& row : table.rows) by_key[{row.id, row.cycle_index}] = &row;

    for (const auto& p : l1.predictions) {
        const auto* row = by_key.at({p.id, p.cycle_index});
        if (row->label == ClassLabel::Unlabeled) continue;
        const ClassLabel final_label =
            p.predicted == ClassLabel::N ? ClassLabel::N : predict(l2.model, row->values).label;
        ++c.confusion[static_cast<std::size_t>(three_index(row->label))]
                     [static_cast<std::size_t>(three_index(final_label))];
        if (three_index(row->label) == three_index(final_label)) ++correct;
        ++total;
    }
    c.accuracy = pct(correct, total);
    return c;
}

} // namespace phono
