#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctgboost/baselines.hpp"
#include "ctgboost/dataset.hpp"
#include "ctgboost/metrics.hpp"
#include "ctgboost/smote.hpp"

namespace ctgboost {

/// Where SMOTE runs relative to fold construction.
///   fold:   oversample each training portion only (no leakage)
///   global: oversample the whole table, then fold it (evaluation folds
///           contain synthetic rows)
///   off:    never oversample
enum class SmoteScope { Fold, Global, Off };

std::string_view to_string(SmoteScope scope) noexcept;
SmoteScope parse_smote_scope(std::string_view name);

struct CvConfig {
    int folds = 20;
    std::uint64_t seed = 123;
    SmoteScope smote_scope = SmoteScope::Fold;
    SmoteConfig smote;
    bool score_train = false;  // also evaluate each fold's training portion
};

/// Fold index per row: each class is shuffled with one seeded stream
/// (classes in ascending order) and dealt round-robin starting at fold 0.
/// Throws FoldsExceedClassCount when a present class has fewer rows than
/// folds, InvalidConfig when folds < 2.
std::vector<int> stratified_folds(const Dataset& ds, int folds, std::uint64_t seed);

struct FoldResult {
    int fold = 0;
    MetricsReport test;
    std::optional<MetricsReport> train;
    double seconds = 0.0;
    std::size_t n_train = 0;
    std::vector<std::uint64_t> eval_row_ids;
    std::vector<int> eval_predictions;
};

struct MetricSummary {
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n - 1)
    double min = 0.0;
    double max = 0.0;
};

struct CvReport {
    std::string model;
    CvConfig config;
    std::vector<FoldResult> folds;
    std::vector<MetricSummary> summary;        // test metrics, flatten() order
    std::vector<MetricSummary> train_summary;  // empty unless score_train
    double total_seconds = 0.0;
    std::uint64_t first_synthetic_id = 0;  // row_ids at or above this are synthetic

    const MetricSummary& metric(std::string_view name) const;
};

/// Summary statistics per flattened metric across the given reports.
std::vector<MetricSummary> summarize(const std::vector<const MetricsReport*>& reports);

CvReport kfold_cv(const Dataset& ds, const ModelSpec& spec, const CvConfig& cfg);

struct LeaderboardRow {
    std::string model;
    std::vector<MetricSummary> metrics;
    double total_seconds = 0.0;

    double mean(std::string_view name) const;
};

struct Leaderboard {
    std::vector<LeaderboardRow> rows;  // accuracy descending, then model name
};

/// Runs every spec over identical folds.
Leaderboard compare_models(const Dataset& ds, const std::vector<ModelSpec>& specs, const CvConfig& cfg);

/// counts[t][p]: rows of true class t predicted as p (stacked-bar form).
struct ClassPredictionError {
    std::vector<std::vector<std::uint64_t>> counts;
};

ClassPredictionError class_prediction_error(std::span<const int> y_pred, std::span<const int> y_true,
                                            std::size_t n_classes = kNumClasses);

struct CurvePoint {
    double value = 0.0;
    double train_score = 0.0;
    double cv_score = 0.0;
};

struct ValidationCurve {
    std::string param;
    std::vector<CurvePoint> points;
};

/// Sweeps n_estimators, num_leaves, or learning_rate of a gbdt spec,
/// scoring mean accuracy on training and evaluation folds.
ValidationCurve validation_curve(const Dataset& ds, const ModelSpec& spec, std::string_view param,
                                 const std::vector<double>& values, CvConfig cfg);

/// Copy of `spec` with one gbdt hyperparameter replaced. Throws UnknownParam
/// or InvalidConfig.
ModelSpec with_param(ModelSpec spec, std::string_view param, double value);

}  // namespace ctgboost
