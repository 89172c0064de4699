#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ctgboost/harness.hpp"
#include "ctgboost/metrics.hpp"

namespace ctgboost::report {

/// Flat key/value JSON document of every metric, per-class values included.
std::string metrics_json(const MetricsReport& r);

/// Leaderboard-layout CSV: Model,Accuracy,AUC,Recall,Prec.,F1,Kappa,MCC.
std::string metrics_csv(const MetricsReport& r, std::string_view model);

/// One-line fixed-width summary in the same column order.
std::string metrics_summary_line(const MetricsReport& r, std::string_view model);

std::string confusion_csv(const ConfusionMatrix& cm);
std::string roc_csv(const RocCurve& curve);
std::string class_error_csv(const ClassPredictionError& e);

std::string cv_report_json(const CvReport& r);
/// One row per fold followed by Mean and SD rows.
std::string cv_report_csv(const CvReport& r);

std::string leaderboard_json(const Leaderboard& b);
/// Adds the "TT (Sec)" column after the metric columns.
std::string leaderboard_csv(const Leaderboard& b);

/// Two-column CSV (value,score) for one side of a validation curve.
std::string curve_csv(const ValidationCurve& c, bool train_side);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Line chart with axes and legend; `source_data` is embedded verbatim
/// (inside an XML comment) for auditability.
std::string svg_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                           const std::vector<Series>& series, std::string_view source_data,
                           double x_min, double x_max, double y_min, double y_max);

std::string svg_stacked_bars(std::string_view title, const ClassPredictionError& e, std::string_view source_data);

std::string roc_svg(const RocResult& roc, std::string_view source_data);
std::string curve_svg(const ValidationCurve& c, std::string_view source_data);

void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace ctgboost::report
