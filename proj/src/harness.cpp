#include "ctgboost/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctgboost/error.hpp"
#include "ctgboost/rng.hpp"

namespace ctgboost {

std::string_view to_string(SmoteScope scope) noexcept {
    switch (scope) {
        case SmoteScope::Fold: return "fold";
        case SmoteScope::Global: return "global";
        case SmoteScope::Off: return "off";
    }
    return "unknown";
}

SmoteScope parse_smote_scope(std::string_view name) {
    if (name == "fold") return SmoteScope::Fold;
    if (name == "global") return SmoteScope::Global;
    if (name == "off") return SmoteScope::Off;
    throw Error(ErrorKind::UnknownParam, "unknown smote scope '" + std::string(name) + "'");
}

std::vector<int> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorKind::InvalidConfig, "folds must be at least 2");
    if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "cannot fold an empty dataset");
    const ClassCounts counts = class_counts(ds);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0 && counts[k] < static_cast<std::size_t>(folds)) {
            throw Error(ErrorKind::FoldsExceedClassCount, std::to_string(folds) + " folds but class " +
                                                              std::string(kClassNames[k]) + " has " +
                                                              std::to_string(counts[k]) + " rows");
        }
    }

    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.label(i))].push_back(i);
    Rng rng(seed);
    std::vector<int> fold_of(ds.size(), -1);
    for (auto& members : by_class) {
        rng.shuffle(std::span(members));
        for (std::size_t j = 0; j < members.size(); ++j) fold_of[members[j]] = static_cast<int>(j % static_cast<std::size_t>(folds));
    }
    return fold_of;
}

const MetricSummary& CvReport::metric(std::string_view name) const {
    for (const auto& m : summary) {
        if (m.name == name) return m;
    }
    throw Error(ErrorKind::UnknownParam, "no metric named '" + std::string(name) + "'");
}

double LeaderboardRow::mean(std::string_view name) const {
    for (const auto& m : metrics) {
        if (m.name == name) return m.mean;
    }
    throw Error(ErrorKind::UnknownParam, "no metric named '" + std::string(name) + "'");
}

std::vector<MetricSummary> summarize(const std::vector<const MetricsReport*>& reports) {
    std::vector<MetricSummary> out;
    if (reports.empty()) return out;
    const auto names = flatten(*reports.front());
    const double n = static_cast<double>(reports.size());
    for (std::size_t m = 0; m < names.size(); ++m) {
        MetricSummary s;
        s.name = names[m].first;
        std::vector<double> values;
        for (const auto* r : reports) values.push_back(flatten(*r)[m].second);
        for (double v : values) s.mean += v;
        s.mean /= n;
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - s.mean) * (v - s.mean);
            s.stddev = std::sqrt(ss / (n - 1.0));
        }
        s.min = *std::min_element(values.begin(), values.end());
        s.max = *std::max_element(values.begin(), values.end());
        out.push_back(s);
    }
    return out;
}

namespace {

MetricsReport score(const FittedModel& model, const Dataset& ds, std::vector<int>* predictions = nullptr) {
    std::vector<int> pred(ds.size());
    std::vector<double> scores;
    scores.reserve(ds.size() * kNumClasses);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto p = predict_proba(model, ds.row(i));
        scores.insert(scores.end(), p.begin(), p.end());
        pred[i] = argmax(p);
    }
    MetricsReport r = evaluate(ds.labels(), pred, scores, kNumClasses);
    if (predictions) *predictions = std::move(pred);
    return r;
}

}  // namespace

CvReport kfold_cv(const Dataset& ds, const ModelSpec& spec, const CvConfig& cfg) {
    using clock = std::chrono::steady_clock;
    if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "cross-validation needs rows");
    spec.validate();
    cfg.smote.validate();

    const auto started = clock::now();
    CvReport report;
    report.model = spec.name();
    report.config = cfg;
    report.first_synthetic_id = ds.max_row_id() + 1;

    const Dataset pool = cfg.smote_scope == SmoteScope::Global ? smote(ds, cfg.smote) : ds;
    const std::vector<int> fold_of = stratified_folds(pool, cfg.folds, cfg.seed);

    for (int fold = 0; fold < cfg.folds; ++fold) {
        const auto fold_start = clock::now();
        std::vector<std::size_t> train_rows, eval_rows;
        for (std::size_t i = 0; i < pool.size(); ++i) (fold_of[i] == fold ? eval_rows : train_rows).push_back(i);
        const Dataset eval = pool.subset(eval_rows);
        Dataset train = pool.subset(train_rows);
        if (cfg.smote_scope == SmoteScope::Fold) train = smote(train, cfg.smote);

        if (cfg.smote_scope == SmoteScope::Fold) {
            for (std::uint64_t id : eval.row_ids()) {
                if (id >= report.first_synthetic_id) throw std::logic_error("synthetic row reached an evaluation fold");
            }
        }

        FoldResult result;
        result.fold = fold;
        result.n_train = train.size();
        try {
            const FittedModel model = fit_model(spec, train);
            result.test = score(model, eval, &result.eval_predictions);
            if (cfg.score_train) result.train = score(model, train);
        } catch (const Error& e) {
            throw Error(e.kind(), "fold " + std::to_string(fold) + " (" + spec.name() + "): " + e.what());
        }
        result.eval_row_ids.assign(eval.row_ids().begin(), eval.row_ids().end());
        result.seconds = std::chrono::duration<double>(clock::now() - fold_start).count();
        report.folds.push_back(std::move(result));
    }

    std::vector<const MetricsReport*> tests, trains;
    for (const auto& f : report.folds) {
        tests.push_back(&f.test);
        if (f.train) trains.push_back(&*f.train);
    }
    report.summary = summarize(tests);
    report.train_summary = summarize(trains);
    report.total_seconds = std::chrono::duration<double>(clock::now() - started).count();
    return report;
}

Leaderboard compare_models(const Dataset& ds, const std::vector<ModelSpec>& specs, const CvConfig& cfg) {
    if (specs.empty()) throw Error(ErrorKind::InvalidConfig, "compare needs at least one model");
    Leaderboard board;
    for (const auto& spec : specs) {
        CvReport r = kfold_cv(ds, spec, cfg);
        board.rows.push_back(LeaderboardRow{r.model, std::move(r.summary), r.total_seconds});
    }
    std::stable_sort(board.rows.begin(), board.rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        const double aa = a.mean("accuracy"), ba = b.mean("accuracy");
        if (aa != ba) return aa > ba;
        return a.model < b.model;
    });
    return board;
}

ClassPredictionError class_prediction_error(std::span<const int> y_pred, std::span<const int> y_true,
                                            std::size_t n_classes) {
    const ConfusionMatrix cm = confusion_matrix(y_true, y_pred, n_classes);
    ClassPredictionError out;
    out.counts.assign(n_classes, std::vector<std::uint64_t>(n_classes, 0));
    for (std::size_t t = 0; t < n_classes; ++t) {
        for (std::size_t p = 0; p < n_classes; ++p) out.counts[t][p] = cm.at(t, p);
    }
    return out;
}

ModelSpec with_param(ModelSpec spec, std::string_view param, double value) {
    auto as_int = [&](std::string_view what) {
        if (value != std::floor(value) || !std::isfinite(value)) {
            throw Error(ErrorKind::InvalidConfig, std::string(what) + " needs an integer value");
        }
        return static_cast<int>(value);
    };
    if (param == "n_estimators") {
        spec.gbdt.n_estimators = as_int(param);
    } else if (param == "num_leaves") {
        spec.gbdt.num_leaves = as_int(param);
    } else if (param == "learning_rate") {
        spec.gbdt.learning_rate = value;
    } else {
        throw Error(ErrorKind::UnknownParam, "cannot sweep '" + std::string(param) + "'");
    }
    spec.validate();
    return spec;
}

ValidationCurve validation_curve(const Dataset& ds, const ModelSpec& spec, std::string_view param,
                                 const std::vector<double>& values, CvConfig cfg) {
    if (spec.kind != ModelKind::Gbdt) throw Error(ErrorKind::InvalidConfig, "validation curves sweep gbdt models");
    std::vector<ModelSpec> specs;
    for (double v : values) specs.push_back(with_param(spec, param, v));

    cfg.score_train = true;
    ValidationCurve curve;
    curve.param = std::string(param);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const CvReport r = kfold_cv(ds, specs[i], cfg);
        double train_acc = 0.0;
        for (const auto& m : r.train_summary) {
            if (m.name == "accuracy") train_acc = m.mean;
        }
        curve.points.push_back({values[i], train_acc, r.metric("accuracy").mean});
    }
    return curve;
}

}  // namespace ctgboost
