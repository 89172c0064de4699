#include <algorithm>
#include <cmath>
#include <set>

#include "ctgboost/error.hpp"
#include "ctgboost/harness.hpp"
#include "doctest.h"
#include "synthetic.hpp"

using namespace ctgboost;

namespace {

CvConfig small_cv(SmoteScope scope, int folds = 5) {
    CvConfig cfg;
    cfg.folds = folds;
    cfg.smote_scope = scope;
    return cfg;
}

ModelSpec fast_gbdt() {
    auto spec = ModelSpec::of(ModelKind::Gbdt);
    spec.gbdt.n_estimators = 10;
    spec.gbdt.min_samples_leaf = 5;
    return spec;
}

}  // namespace

TEST_CASE("stratified folds cover each row once and balance every class") {
    const auto ds = testing::make_ctg_like(1, {103, 41, 22});
    for (int k : {2, 5, 20}) {
        const auto fold_of = stratified_folds(ds, k, 123);
        REQUIRE(fold_of.size() == ds.size());
        for (int c = 0; c < 3; ++c) {
            std::vector<int> sizes(static_cast<std::size_t>(k), 0);
            for (std::size_t i = 0; i < ds.size(); ++i) {
                if (ds.label(i) == c) ++sizes[static_cast<std::size_t>(fold_of[i])];
            }
            const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
            CHECK(*hi - *lo <= 1);
        }
    }
    CHECK(stratified_folds(ds, 5, 1) == stratified_folds(ds, 5, 1));
    CHECK(stratified_folds(ds, 5, 1) != stratified_folds(ds, 5, 2));
}

TEST_CASE("folds larger than a class are rejected") {
    const auto ds = testing::make_blobs(1, {30, 10, 4}, 2, 1.0);
    try {
        stratified_folds(ds, 5, 1);
        FAIL("expected FoldsExceedClassCount");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FoldsExceedClassCount);
    }
    CHECK_THROWS_AS(stratified_folds(ds, 1, 1), Error);
}

TEST_CASE("fold-scope smote never lets a synthetic row into evaluation") {
    const auto ds = testing::make_ctg_like(2, {150, 30, 20});
    const auto r = kfold_cv(ds, ModelSpec::of(ModelKind::Knn), small_cv(SmoteScope::Fold));
    std::multiset<std::uint64_t> seen;
    for (const auto& f : r.folds) {
        for (auto id : f.eval_row_ids) {
            CHECK(id < r.first_synthetic_id);
            seen.insert(id);
        }
        // Training portion is oversampled to 3 x its majority count.
        CHECK(f.n_train == 3 * (150 - 150 / 5));
    }
    CHECK(seen.size() == ds.size());
    CHECK(std::set(seen.begin(), seen.end()).size() == ds.size());
}

TEST_CASE("global-scope smote evaluates on the oversampled pool") {
    const auto ds = testing::make_ctg_like(3, {150, 30, 20});
    const auto r = kfold_cv(ds, ModelSpec::of(ModelKind::Dummy), small_cv(SmoteScope::Global));
    std::size_t evaluated = 0, synthetic = 0;
    for (const auto& f : r.folds) {
        evaluated += f.eval_row_ids.size();
        for (auto id : f.eval_row_ids) synthetic += id >= r.first_synthetic_id;
    }
    CHECK(evaluated == 450);
    CHECK(synthetic == 250);
    // The modal class of a balanced training fold is class 0, so dummy accuracy is one third.
    CHECK(r.metric("accuracy").mean == doctest::Approx(1.0 / 3.0));
    CHECK(r.metric("precision").mean == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("kfold_cv equals a manual fold-by-fold computation") {
    const auto ds = testing::make_blobs(4, {4, 4, 4}, 2, 1.5);
    for (auto scope : {SmoteScope::Off, SmoteScope::Fold}) {
        const auto cfg = small_cv(scope, 4);
        auto spec = ModelSpec::of(ModelKind::Knn);
        spec.knn.k = 3;
        const auto r = kfold_cv(ds, spec, cfg);

        const auto fold_of = stratified_folds(ds, 4, cfg.seed);
        double acc = 0.0;
        for (int fold = 0; fold < 4; ++fold) {
            std::vector<std::size_t> tr, ev;
            for (std::size_t i = 0; i < ds.size(); ++i) (fold_of[i] == fold ? ev : tr).push_back(i);
            Dataset train = ds.subset(tr);
            if (scope == SmoteScope::Fold) train = smote(train, cfg.smote);
            const auto model = fit_model(spec, train);
            double correct = 0.0;
            for (auto i : ev) correct += predict(model, ds.row(i)) == ds.label(i);
            acc += correct / static_cast<double>(ev.size());
            CHECK(r.folds[static_cast<std::size_t>(fold)].n_train == train.size());
        }
        CHECK(r.metric("accuracy").mean == doctest::Approx(acc / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("summaries use the sample standard deviation") {
    const auto ds = testing::make_ctg_like(5, {120, 30, 25});
    const auto r = kfold_cv(ds, ModelSpec::of(ModelKind::Cart), small_cv(SmoteScope::Off));
    std::vector<double> acc;
    for (const auto& f : r.folds) acc.push_back(f.test.accuracy());
    double mean = 0.0;
    for (double a : acc) mean += a / static_cast<double>(acc.size());
    double ss = 0.0;
    for (double a : acc) ss += (a - mean) * (a - mean);
    const auto& m = r.metric("accuracy");
    CHECK(m.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(m.stddev == doctest::Approx(std::sqrt(ss / static_cast<double>(acc.size() - 1))).epsilon(1e-12));
    CHECK(m.min == *std::min_element(acc.begin(), acc.end()));
    CHECK(m.max == *std::max_element(acc.begin(), acc.end()));
    CHECK_THROWS_AS(r.metric("nonsense"), Error);
}

TEST_CASE("leaderboard is sorted by accuracy and reproducible") {
    const auto ds = testing::make_ctg_like(6, {150, 40, 25});
    const std::vector<ModelSpec> specs{ModelSpec::of(ModelKind::Dummy), fast_gbdt(), ModelSpec::of(ModelKind::Knn),
                                       ModelSpec::of(ModelKind::Cart)};
    const auto cfg = small_cv(SmoteScope::Fold);
    const auto a = compare_models(ds, specs, cfg);
    const auto b = compare_models(ds, specs, cfg);
    REQUIRE(a.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.rows[i].model == b.rows[i].model);
        for (std::size_t m = 0; m < a.rows[i].metrics.size(); ++m) CHECK(a.rows[i].metrics[m].mean == b.rows[i].metrics[m].mean);
        if (i > 0) CHECK(a.rows[i - 1].mean("accuracy") >= a.rows[i].mean("accuracy"));
    }
    CHECK(a.rows.back().model == "dummy");
}

TEST_CASE("class prediction error stacks predictions per true class") {
    const std::vector<int> pred{0, 1, 1, 2, 0, 2, 2}, truth{0, 0, 1, 2, 2, 2, 1};
    const auto e = class_prediction_error(pred, truth);
    CHECK(e.counts[0] == std::vector<std::uint64_t>{1, 1, 0});
    CHECK(e.counts[1] == std::vector<std::uint64_t>{0, 1, 1});
    CHECK(e.counts[2] == std::vector<std::uint64_t>{1, 0, 2});
}

TEST_CASE("validation curve points equal independent cross-validation runs") {
    const auto ds = testing::make_ctg_like(7, {100, 30, 20});
    const auto cfg = small_cv(SmoteScope::Fold, 3);
    const std::vector<double> values{0, 5, 15};
    const auto curve = validation_curve(ds, fast_gbdt(), "n_estimators", values, cfg);
    REQUIRE(curve.points.size() == 3);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto r = kfold_cv(ds, with_param(fast_gbdt(), "n_estimators", values[i]), cfg);
        CHECK(curve.points[i].value == values[i]);
        CHECK(curve.points[i].cv_score == r.metric("accuracy").mean);
        CHECK(curve.points[i].train_score >= 0.0);
        CHECK(curve.points[i].train_score <= 1.0);
    }
    // More boosting fits the (balanced) training folds better.
    CHECK(curve.points[2].train_score > curve.points[0].train_score);
}

TEST_CASE("parameter sweeps validate names and values") {
    CHECK(with_param(fast_gbdt(), "num_leaves", 7).gbdt.num_leaves == 7);
    CHECK(with_param(fast_gbdt(), "learning_rate", 0.05).gbdt.learning_rate == 0.05);
    CHECK_THROWS_AS(with_param(fast_gbdt(), "num_leaves", 7.5), Error);
    CHECK_THROWS_AS(with_param(fast_gbdt(), "depth", 3), Error);
    CHECK_THROWS_AS(with_param(fast_gbdt(), "learning_rate", -1), Error);
    CHECK(parse_smote_scope("global") == SmoteScope::Global);
    CHECK_THROWS_AS(parse_smote_scope("everywhere"), Error);
}
