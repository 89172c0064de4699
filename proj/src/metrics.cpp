#include "ctgboost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctgboost/error.hpp"

namespace ctgboost {

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < k_; ++j) s += at(i, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += at(i, j);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < k_; ++i) s += at(i, i);
    return s;
}

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0}); }

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred, std::size_t n_classes) {
    if (y_true.size() != y_pred.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(y_true.size()) + " labels vs " +
                                                   std::to_string(y_pred.size()) + " predictions");
    }
    ConfusionMatrix cm(n_classes);
    const auto k = static_cast<int>(n_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= k || y_pred[i] < 0 || y_pred[i] >= k) {
            throw Error(ErrorKind::LabelOutOfRange, "label at position " + std::to_string(i) + " outside [0, " +
                                                        std::to_string(n_classes) + ")");
        }
        ++cm.at(static_cast<std::size_t>(y_true[i]), static_cast<std::size_t>(y_pred[i]));
    }
    return cm;
}

namespace {

void require_nonempty(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw Error(ErrorKind::EmptyMatrix, "confusion matrix has no entries");
}

}  // namespace

SummaryMetrics summary_metrics(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const std::size_t K = cm.n_classes();
    const double total = static_cast<double>(cm.total());

    SummaryMetrics s;
    s.accuracy = static_cast<double>(cm.trace()) / total;
    s.precision.resize(K);
    s.recall.resize(K);
    s.f1.resize(K);
    std::size_t supported = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double tp = static_cast<double>(cm.at(k, k));
        const auto row = cm.row_sum(k);
        const auto col = cm.col_sum(k);
        if (col == 0 || row == 0) s.zero_division = true;
        s.precision[k] = col == 0 ? 0.0 : tp / static_cast<double>(col);
        s.recall[k] = row == 0 ? 0.0 : tp / static_cast<double>(row);
        const double pr = s.precision[k] + s.recall[k];
        s.f1[k] = pr == 0.0 ? 0.0 : 2.0 * s.precision[k] * s.recall[k] / pr;

        if (row == 0) continue;
        ++supported;
        s.macro_precision += s.precision[k];
        s.macro_recall += s.recall[k];
        s.macro_f1 += s.f1[k];
        const double w = static_cast<double>(row) / total;
        s.weighted_precision += w * s.precision[k];
        s.weighted_recall += w * s.recall[k];
        s.weighted_f1 += w * s.f1[k];
    }
    s.macro_precision /= static_cast<double>(supported);
    s.macro_recall /= static_cast<double>(supported);
    s.macro_f1 /= static_cast<double>(supported);
    return s;
}

double cohen_kappa(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const double n = static_cast<double>(cm.total());
    const double po = static_cast<double>(cm.trace()) / n;
    double pe = 0.0;
    for (std::size_t k = 0; k < cm.n_classes(); ++k) {
        pe += static_cast<double>(cm.row_sum(k)) * static_cast<double>(cm.col_sum(k));
    }
    pe /= n * n;
    if (pe == 1.0) return 0.0;
    return (po - pe) / (1.0 - pe);
}

double mcc_multiclass(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    const double s = static_cast<double>(cm.total());
    const double c = static_cast<double>(cm.trace());
    double pt = 0.0, pp = 0.0, tt = 0.0;
    for (std::size_t k = 0; k < cm.n_classes(); ++k) {
        const double t = static_cast<double>(cm.row_sum(k));
        const double p = static_cast<double>(cm.col_sum(k));
        pt += p * t;
        pp += p * p;
        tt += t * t;
    }
    const double denom = std::sqrt((s * s - pp) * (s * s - tt));
    if (denom == 0.0) return 0.0;
    return (c * s - pt) / denom;
}

RocResult roc_auc_ovr(std::span<const double> scores, std::span<const int> y_true, std::size_t n_classes) {
    const std::size_t n = y_true.size();
    if (scores.size() != n * n_classes) throw Error(ErrorKind::LengthMismatch, "score matrix does not match labels");

    RocResult result;
    std::vector<std::size_t> order(n);
    double support_total = 0.0;
    std::size_t usable = 0;
    for (std::size_t k = 0; k < n_classes; ++k) {
        RocCurve curve;
        curve.cls = k;
        for (int y : y_true) (static_cast<std::size_t>(y) == k ? curve.positives : curve.negatives) += 1;
        if (curve.positives == 0 || curve.negatives == 0) {
            curve.degenerate = true;
            result.curves.push_back(std::move(curve));
            continue;
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return scores[a * n_classes + k] > scores[b * n_classes + k]; });

        // Trapezoid area in integer units: Σ Δfp (tp_prev + tp) = 2 * P * N * AUC.
        std::uint64_t tp = 0, fp = 0;
        unsigned __int128 twice_area = 0;
        const double P = static_cast<double>(curve.positives);
        const double N = static_cast<double>(curve.negatives);
        curve.fpr.push_back(0.0);
        curve.tpr.push_back(0.0);
        curve.thresholds.push_back(std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n;) {
            const double s = scores[order[i] * n_classes + k];
            const std::uint64_t tp_prev = tp, fp_prev = fp;
            for (; i < n && scores[order[i] * n_classes + k] == s; ++i) {
                (static_cast<std::size_t>(y_true[order[i]]) == k ? tp : fp) += 1;
            }
            twice_area += static_cast<unsigned __int128>(fp - fp_prev) * (tp_prev + tp);
            curve.fpr.push_back(static_cast<double>(fp) / N);
            curve.tpr.push_back(static_cast<double>(tp) / P);
            curve.thresholds.push_back(s);
        }
        curve.auc = static_cast<double>(twice_area) / (2.0 * P * N);

        ++usable;
        result.macro_auc += curve.auc;
        result.weighted_auc += P * curve.auc;
        support_total += P;
        result.curves.push_back(std::move(curve));
    }
    if (usable > 0) {
        result.defined = true;
        result.macro_auc /= static_cast<double>(usable);
        result.weighted_auc /= support_total;
    }
    return result;
}

MetricsReport evaluate(std::span<const int> y_true, std::span<const int> y_pred, std::span<const double> scores,
                       std::size_t n_classes) {
    MetricsReport r;
    r.n_evaluated = y_true.size();
    r.cm = confusion_matrix(y_true, y_pred, n_classes);
    r.summary = summary_metrics(r.cm);
    r.kappa = cohen_kappa(r.cm);
    r.mcc = mcc_multiclass(r.cm);
    const RocResult roc = roc_auc_ovr(scores, y_true, n_classes);
    r.auc_defined = roc.defined;
    r.auc_macro = roc.macro_auc;
    r.auc_weighted = roc.weighted_auc;
    return r;
}

std::vector<std::pair<std::string, double>> flatten(const MetricsReport& r) {
    const auto& s = r.summary;
    return {
        {"accuracy", s.accuracy},
        {"auc", r.auc_weighted},
        {"recall", s.weighted_recall},
        {"precision", s.weighted_precision},
        {"f1", s.weighted_f1},
        {"kappa", r.kappa},
        {"mcc", r.mcc},
        {"auc_macro", r.auc_macro},
        {"recall_macro", s.macro_recall},
        {"precision_macro", s.macro_precision},
        {"f1_macro", s.macro_f1},
    };
}

}  // namespace ctgboost
