#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ctgboost {

/// cm(i, j) counts rows of true class i predicted as j.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t n_classes) : k_(n_classes), cells_(n_classes * n_classes, 0) {}

    std::size_t n_classes() const noexcept { return k_; }
    std::uint64_t& at(std::size_t i, std::size_t j) { return cells_[i * k_ + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return cells_[i * k_ + j]; }

    std::uint64_t row_sum(std::size_t i) const;
    std::uint64_t col_sum(std::size_t j) const;
    std::uint64_t trace() const;
    std::uint64_t total() const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t k_ = 0;
    std::vector<std::uint64_t> cells_;
};

/// Throws LengthMismatch or LabelOutOfRange.
ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred, std::size_t n_classes);

struct SummaryMetrics {
    double accuracy = 0.0;
    std::vector<double> precision, recall, f1;  // per class
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    bool zero_division = false;  // some per-class ratio had a zero denominator
};

/// Per-class, macro (over classes with support) and support-weighted
/// precision/recall/F1. Zero denominators yield 0. Throws EmptyMatrix.
SummaryMetrics summary_metrics(const ConfusionMatrix& cm);

/// (p_o - p_e) / (1 - p_e); 0 when p_e = 1. Throws EmptyMatrix.
double cohen_kappa(const ConfusionMatrix& cm);

/// Gorodkin's K-class MCC; 0 when the denominator vanishes. Throws EmptyMatrix.
double mcc_multiclass(const ConfusionMatrix& cm);

struct RocCurve {
    std::size_t cls = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    bool degenerate = false;  // no positives or no negatives; excluded from aggregates
    std::vector<double> fpr, tpr;
    std::vector<double> thresholds;  // score at each step; +inf for the (0,0) start
    double auc = 0.0;
};

struct RocResult {
    std::vector<RocCurve> curves;
    double macro_auc = 0.0;
    double weighted_auc = 0.0;
    bool defined = false;  // false when every class was degenerate
};

/// One-vs-rest ROC per class from row-major n x K scores. Equal scores
/// form a single threshold step, so AUC equals the tie-averaged
/// Mann-Whitney statistic.
RocResult roc_auc_ovr(std::span<const double> scores, std::span<const int> y_true, std::size_t n_classes);

struct MetricsReport {
    std::size_t n_evaluated = 0;
    ConfusionMatrix cm;
    SummaryMetrics summary;
    double auc_macro = 0.0;
    double auc_weighted = 0.0;
    bool auc_defined = false;
    double kappa = 0.0;
    double mcc = 0.0;

    double accuracy() const noexcept { return summary.accuracy; }
};

MetricsReport evaluate(std::span<const int> y_true, std::span<const int> y_pred, std::span<const double> scores,
                       std::size_t n_classes);

/// Ordered scalar view used by aggregation and serialisation. The first
/// seven entries follow the leaderboard column order (weighted variants).
std::vector<std::pair<std::string, double>> flatten(const MetricsReport& r);

}  // namespace ctgboost
