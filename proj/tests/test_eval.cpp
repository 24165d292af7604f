#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "phono/evaluate.hpp"
#include "phono/metrics.hpp"
#include "phono/rng.hpp"
#include "phono/segmentation.hpp"
#include "phono/split.hpp"
#include "phono/synth.hpp"
#include "phono/table.hpp"

using namespace phono;

namespace {

FeatureTable synthetic_table(std::size_t per_class, double sep, std::uint64_t seed) {
    // Gaussian blobs with class offsets in every dimension, so the task is
    // separable under any of the four decision geometries.
    FeatureTable t;
    t.layout = FeatureLayout::TD40;
    Rng rng(seed);
    std::size_t counter = 0;
    for (ClassLabel cls : {ClassLabel::N, ClassLabel::AS, ClassLabel::MI}) {
        for (std::size_t i = 0; i < per_class; ++i) {
            FeatureTable::Row row;
            row.id = std::string(to_string(cls)) + "_rec" + std::to_string(i / 5);
            row.cycle_index = counter++;
            row.label = cls;
            row.values.resize(40);
            for (std::size_t j = 0; j < row.values.size(); ++j) {
                row.values[j] = rng.normal();
                if (cls == ClassLabel::N) row.values[j] -= sep;
                if (cls == ClassLabel::AS) row.values[j] += sep;
                if (cls == ClassLabel::MI) row.values[j] += (j % 2 == 0) ? sep : 3.0 * sep;
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

} // namespace

TEST_CASE("stratified_split partitions each class at the requested fractions") {
    std::vector<ClassLabel> labels;
    for (int i = 0; i < 100; ++i) labels.push_back(ClassLabel::N);
    for (int i = 0; i < 100; ++i) labels.push_back(ClassLabel::AbN);

    auto s = stratified_split(labels, {0.7, 0.0, 0.3}, 7);
    CHECK(s.train.size() == 140);
    CHECK(s.validation.empty());
    CHECK(s.test.size() == 60);

    // disjoint and exhaustive
    std::vector<char> seen(labels.size(), 0);
    for (auto grp : {&s.train, &s.validation, &s.test})
        for (std::size_t i : *grp) {
            REQUIRE(seen[i] == 0);
            seen[i] = 1;
        }
    CHECK(std::count(seen.begin(), seen.end(), 1) == 200);

    // per-class counts within one of the target
    for (ClassLabel cls : {ClassLabel::N, ClassLabel::AbN}) {
        std::int64_t n_train = 0;
        for (std::size_t i : s.train)
            if (labels[i] == cls) ++n_train;
        CHECK(std::abs(n_train - 70) <= 1);
    }
}

TEST_CASE("stratified_split is deterministic and validates inputs") {
    std::vector<ClassLabel> labels(40, ClassLabel::AS);
    for (int i = 0; i < 40; ++i) labels.push_back(ClassLabel::MI);

    auto a = stratified_split(labels, {0.7, 0.15, 0.15}, 42);
    auto b = stratified_split(labels, {0.7, 0.15, 0.15}, 42);
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);
    CHECK(a.test == b.test);

    auto c = stratified_split(labels, {0.7, 0.15, 0.15}, 43);
    CHECK(a.train != c.train);

    std::vector<ClassLabel> tiny = {ClassLabel::N, ClassLabel::N, ClassLabel::AS, ClassLabel::AS,
                                    ClassLabel::AS};
    CHECK_THROWS_AS(stratified_split(tiny, {0.7, 0.0, 0.3}, 1), ClassTooSmall);
    CHECK_THROWS_AS(stratified_split(labels, {0.7, 0.0, 0.2}, 1), InvalidParams);
}

TEST_CASE("compute_metrics formulas") {
    SECTION("direct counts") {
        // positive class = index 0 here: TP=99 FN=1 FP=0 TN=100
        auto r = compute_metrics({{{99, 1}, {0, 100}}}, {ClassLabel::N, ClassLabel::AbN});
        REQUIRE(r.per_class[0].sensitivity.has_value());
        CHECK(*r.per_class[0].sensitivity == Catch::Approx(99.0));
        CHECK(*r.per_class[0].precision == Catch::Approx(100.0));
        CHECK(*r.accuracy == Catch::Approx(99.5));
    }
    SECTION("undefined precision is flagged, not zero") {
        // class 0 never predicted: TP=0 FP=0
        auto r = compute_metrics({{{0, 5}, {0, 5}}}, {ClassLabel::N, ClassLabel::AbN});
        CHECK_FALSE(r.per_class[0].precision.has_value());
        CHECK(r.per_class[0].sensitivity.has_value());
    }
    SECTION("swapping the positive class swaps sensitivity and specificity") {
        auto r = compute_metrics({{{37, 5}, {2, 56}}}, {ClassLabel::AS, ClassLabel::MI});
        CHECK(*r.per_class[0].sensitivity == Catch::Approx(*r.per_class[1].specificity));
        CHECK(*r.per_class[1].sensitivity == Catch::Approx(*r.per_class[0].specificity));
    }
    SECTION("degenerate always-one-class predictor") {
        std::vector<int> truth = {0, 0, 1, 1, 1};
        std::vector<int> pred = {1, 1, 1, 1, 1};
        auto r = compute_metrics(truth, pred, {ClassLabel::N, ClassLabel::AbN});
        CHECK(*r.per_class[1].sensitivity == Catch::Approx(100.0));
        CHECK(*r.per_class[0].sensitivity == Catch::Approx(0.0));
    }
}

TEST_CASE("score_segmentation matching rules") {
    SECTION("a close detection matches") {
        std::vector<HeartSoundEvent> det(1);
        det[0].kind = SoundKind::S1;
        det[0].peak_t = 1.02;
        std::vector<TruthEvent> truth = {{SoundKind::S1, 1.00, 0.95, 1.05}};
        auto s = score_segmentation(det, truth, 0.1);
        CHECK(s.s1.matched == 1);
        CHECK(*s.s1.sensitivity == Catch::Approx(100.0));
        CHECK(*s.s1.precision == Catch::Approx(100.0));
    }
    SECTION("one-to-one: a duplicate detection costs precision") {
        std::vector<HeartSoundEvent> det(2);
        det[0].kind = SoundKind::S1;
        det[0].peak_t = 0.98;
        det[1].kind = SoundKind::S1;
        det[1].peak_t = 1.03;
        std::vector<TruthEvent> truth = {{SoundKind::S1, 1.00, 0.95, 1.05}};
        auto s = score_segmentation(det, truth, 0.1);
        CHECK(s.s1.matched == 1);
        CHECK(*s.s1.sensitivity == Catch::Approx(100.0));
        CHECK(*s.s1.precision == Catch::Approx(50.0));
    }
    SECTION("kinds never cross-match") {
        std::vector<HeartSoundEvent> det(1);
        det[0].kind = SoundKind::S2;
        det[0].peak_t = 1.00;
        std::vector<TruthEvent> truth = {{SoundKind::S1, 1.00, 0.95, 1.05}};
        auto s = score_segmentation(det, truth, 0.1);
        CHECK(s.s1.matched == 0);
        CHECK(s.s2.matched == 0);
    }
}

TEST_CASE("segmentation scores on a synthetic batch stay above 95%") {
    std::int64_t s1_matched = 0, s1_truth = 0, s1_det = 0;
    std::int64_t s2_matched = 0, s2_truth = 0, s2_det = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        auto [rec, truth] = synth_corpus_item(ClassLabel::N, i, 7);
        auto seg = segment(rec);
        auto s = score_segmentation(seg.events, truth.events, 0.1);
        s1_matched += s.s1.matched;
        s1_truth += s.s1.truth_count;
        s1_det += s.s1.detected_count;
        s2_matched += s.s2.matched;
        s2_truth += s.s2.truth_count;
        s2_det += s.s2.detected_count;
    }
    CHECK(100.0 * s1_matched / s1_truth >= 95.0);
    CHECK(100.0 * s1_matched / s1_det >= 95.0);
    CHECK(100.0 * s2_matched / s2_truth >= 95.0);
    CHECK(100.0 * s2_matched / s2_det >= 95.0);
}

TEST_CASE("run_level on a separable task reaches 100% with every classifier") {
    auto table = synthetic_table(40, 6.0, 11);
    for (ClassifierKind kind : {ClassifierKind::KNN, ClassifierKind::SVM, ClassifierKind::MLP,
                                ClassifierKind::Mahalanobis}) {
        TrainOptions opt;
        opt.mlp.max_epochs = 200;
        auto run = run_level(table, Level::L1, kind, 7, opt);
        INFO("classifier " << to_string(kind));
        REQUIRE(run.cycle_metrics.accuracy.has_value());
        CHECK(*run.cycle_metrics.accuracy == Catch::Approx(100.0));

        auto run2 = run_level(table, Level::L2, kind, 7, opt);
        REQUIRE(run2.cycle_metrics.accuracy.has_value());
        CHECK(*run2.cycle_metrics.accuracy == Catch::Approx(100.0));
    }
}

TEST_CASE("run_level maps labels onto the right binary tasks") {
    auto table = synthetic_table(30, 4.0, 3);
    auto run = run_level(table, Level::L1, ClassifierKind::KNN, 5);
    CHECK(run.cycle_metrics.classes[0] == ClassLabel::N);
    CHECK(run.cycle_metrics.classes[1] == ClassLabel::AbN);
    // 90 cycles: 30 N + 60 abN; test = 30% = 9 + 18
    CHECK(run.cycle_metrics.total() == 27);

    auto run2 = run_level(table, Level::L2, ClassifierKind::KNN, 5);
    CHECK(run2.cycle_metrics.classes[0] == ClassLabel::AS);
    CHECK(run2.cycle_metrics.classes[1] == ClassLabel::MI);
    CHECK(run2.cycle_metrics.total() == 18);
}

TEST_CASE("run_level is reproducible for a fixed seed") {
    auto table = synthetic_table(25, 3.0, 17);
    auto a = run_level(table, Level::L1, ClassifierKind::SVM, 9);
    auto b = run_level(table, Level::L1, ClassifierKind::SVM, 9);
    REQUIRE(a.predictions.size() == b.predictions.size());
    for (std::size_t i = 0; i < a.predictions.size(); ++i) {
        CHECK(a.predictions[i].predicted == b.predictions[i].predicted);
        CHECK(a.predictions[i].score == b.predictions[i].score);
    }
}

TEST_CASE("feature table CSV round trip") {
    auto table = synthetic_table(5, 2.0, 23);
    auto path = std::filesystem::temp_directory_path() / "phono_tests" / "table.csv";
    std::filesystem::create_directories(path.parent_path());
    save_feature_table(table, path);
    auto back = load_feature_table(path);
    REQUIRE(back.rows.size() == table.rows.size());
    CHECK(back.layout == table.layout);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(back.rows[i].id == table.rows[i].id);
        CHECK(back.rows[i].label == table.rows[i].label);
        REQUIRE(back.rows[i].values.size() == table.rows[i].values.size());
        for (std::size_t j = 0; j < table.rows[i].values.size(); ++j)
            REQUIRE(back.rows[i].values[j] == table.rows[i].values[j]); // %.17g round trip
    }
}

TEST_CASE("metrics JSON is recomputable from its confusion counts") {
    auto r = compute_metrics({{{42, 3}, {7, 48}}}, {ClassLabel::N, ClassLabel::AbN});
    auto j = metrics_to_json(r);
    const std::int64_t tp = j["confusion"][0][0], fn = j["confusion"][0][1];
    const std::int64_t fp = j["confusion"][1][0], tn = j["confusion"][1][1];
    CHECK(j["per_class"]["N"]["sensitivity"].get<double>() ==
          Catch::Approx(100.0 * tp / (tp + fn)));
    CHECK(j["per_class"]["N"]["precision"].get<double>() ==
          Catch::Approx(100.0 * tp / (tp + fp)));
    CHECK(j["per_class"]["N"]["specificity"].get<double>() ==
          Catch::Approx(100.0 * tn / (tn + fp)));
    CHECK(j["accuracy"].get<double>() ==
          Catch::Approx(100.0 * (tp + tn) / (tp + fn + fp + tn)));
}
