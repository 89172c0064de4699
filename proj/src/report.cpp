#include "ctgboost/report.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "ctgboost/dataset.hpp"
#include "ctgboost/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace ctgboost::report {

using nlohmann::ordered_json;

namespace {

constexpr std::string_view kColumns = "Accuracy,AUC,Recall,Prec.,F1,Kappa,MCC";

std::string class_name(std::size_t k) {
    return k < kClassNames.size() ? std::string(kClassNames[k]) : "class" + std::to_string(k);
}

ordered_json metrics_object(const MetricsReport& r) {
    ordered_json j;
    for (const auto& [name, value] : flatten(r)) j[name] = value;
    j["auc_weighted"] = r.auc_weighted;
    j["recall_weighted"] = r.summary.weighted_recall;
    j["precision_weighted"] = r.summary.weighted_precision;
    j["f1_weighted"] = r.summary.weighted_f1;
    j["auc_defined"] = r.auc_defined;
    j["zero_division"] = r.summary.zero_division;
    for (std::size_t k = 0; k < r.summary.precision.size(); ++k) {
        j["precision_" + class_name(k)] = r.summary.precision[k];
        j["recall_" + class_name(k)] = r.summary.recall[k];
        j["f1_" + class_name(k)] = r.summary.f1[k];
    }
    j["n_evaluated"] = r.n_evaluated;
    return j;
}

ordered_json summary_array(const std::vector<MetricSummary>& s) {
    ordered_json out = ordered_json::object();
    for (const auto& m : s) out[m.name] = {{"mean", m.mean}, {"sd", m.stddev}, {"min", m.min}, {"max", m.max}};
    return out;
}

std::string headline_values(const std::vector<double>& v, int digits) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += digits < 0 ? text::round_trip(v[i]) : text::fixed(v[i], digits);
    }
    return out;
}

std::vector<double> headline(const MetricsReport& r) {
    std::vector<double> v;
    for (const auto& kv : flatten(r)) {
        v.push_back(kv.second);
        if (v.size() == 7) break;
    }
    return v;
}

std::vector<double> headline_means(const std::vector<MetricSummary>& s) {
    std::vector<double> v;
    for (std::size_t i = 0; i < std::min<std::size_t>(7, s.size()); ++i) v.push_back(s[i].mean);
    return v;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// "--" may not appear inside an XML comment.
std::string comment_safe(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '-' && !out.empty() && out.back() == '-') out += ' ';
        out += c;
    }
    if (!out.empty() && out.back() == '-') out += ' ';
    return out;
}

constexpr std::array<std::string_view, 6> kPalette{"#1f77b4", "#ff7f0e", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

struct Frame {
    double width = 640, height = 440, left = 70, right = 170, top = 40, bottom = 60;
    double x0, x1, y0, y1;
    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

std::string num(double v) { return text::fixed(v, 2); }

void axes(std::ostringstream& o, const Frame& f, std::string_view title, std::string_view x_label,
          std::string_view y_label) {
    o << "<text x=\"" << num(f.width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(title)
      << "</text>\n";
    o << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(f.height - f.bottom) << "\" x2=\"" << num(f.width - f.right)
      << "\" y2=\"" << num(f.height - f.bottom) << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(f.top) << "\" x2=\"" << num(f.left) << "\" y2=\""
      << num(f.height - f.bottom) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
        o << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(f.height - f.bottom + 18)
          << "\" text-anchor=\"middle\" font-size=\"11\">" << text::fixed(xv, 2) << "</text>\n";
        o << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(f.py(yv) + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">" << text::fixed(yv, 2) << "</text>\n";
    }
    o << "<text x=\"" << num((f.left + f.width - f.right) / 2) << "\" y=\"" << num(f.height - 15)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(x_label) << "</text>\n";
    o << "<text x=\"18\" y=\"" << num((f.top + f.height - f.bottom) / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << num((f.top + f.height - f.bottom) / 2) << ")\">" << escape_xml(y_label)
      << "</text>\n";
}

std::string svg_open(const Frame& f, std::string_view source_data) {
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width) << "\" height=\"" << num(f.height)
      << "\" viewBox=\"0 0 " << num(f.width) << ' ' << num(f.height) << "\">\n";
    o << "<!-- source data\n" << comment_safe(source_data) << "\n-->\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return o.str();
}

}  // namespace

std::string metrics_json(const MetricsReport& r) { return metrics_object(r).dump(2) + "\n"; }

std::string metrics_csv(const MetricsReport& r, std::string_view model) {
    return "Model," + std::string(kColumns) + "\n" + std::string(model) + "," + headline_values(headline(r), -1) + "\n";
}

std::string metrics_summary_line(const MetricsReport& r, std::string_view model) {
    std::ostringstream o;
    o << "Model     Accuracy  AUC     Recall  Prec.   F1      Kappa   MCC\n";
    std::string name(model);
    name.resize(std::max<std::size_t>(name.size(), 9), ' ');
    o << name << ' ';
    for (double v : headline(r)) o << text::fixed(v, 4) << "  ";
    o << '\n';
    return o.str();
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::ostringstream o;
    o << "true\\pred";
    for (std::size_t j = 0; j < cm.n_classes(); ++j) o << ',' << class_name(j);
    o << '\n';
    for (std::size_t i = 0; i < cm.n_classes(); ++i) {
        o << class_name(i);
        for (std::size_t j = 0; j < cm.n_classes(); ++j) o << ',' << cm.at(i, j);
        o << '\n';
    }
    return o.str();
}

std::string roc_csv(const RocCurve& c) {
    std::ostringstream o;
    o << "threshold,fpr,tpr\n";
    for (std::size_t i = 0; i < c.fpr.size(); ++i) {
        o << text::round_trip(c.thresholds[i]) << ',' << text::round_trip(c.fpr[i]) << ','
          << text::round_trip(c.tpr[i]) << '\n';
    }
    return o.str();
}

std::string class_error_csv(const ClassPredictionError& e) {
    std::ostringstream o;
    o << "true_class";
    for (std::size_t p = 0; p < e.counts.size(); ++p) o << ",predicted_" << class_name(p);
    o << ",total\n";
    for (std::size_t t = 0; t < e.counts.size(); ++t) {
        o << class_name(t);
        std::uint64_t total = 0;
        for (auto c : e.counts[t]) {
            o << ',' << c;
            total += c;
        }
        o << ',' << total << '\n';
    }
    return o.str();
}

std::string cv_report_json(const CvReport& r) {
    ordered_json j;
    j["model"] = r.model;
    j["folds"] = r.config.folds;
    j["seed"] = r.config.seed;
    j["smote_scope"] = std::string(to_string(r.config.smote_scope));
    j["smote_k_neighbors"] = r.config.smote.k_neighbors;
    j["summary"] = summary_array(r.summary);
    if (!r.train_summary.empty()) j["train_summary"] = summary_array(r.train_summary);
    ordered_json folds = ordered_json::array();
    for (const auto& f : r.folds) {
        ordered_json fj = metrics_object(f.test);
        fj["fold"] = f.fold;
        fj["n_train"] = f.n_train;
        fj["seconds"] = f.seconds;
        folds.push_back(fj);
    }
    j["per_fold"] = folds;
    j["total_seconds"] = r.total_seconds;
    return j.dump(2) + "\n";
}

std::string cv_report_csv(const CvReport& r) {
    std::ostringstream o;
    o << "Fold," << kColumns << ",TT (Sec)\n";
    for (const auto& f : r.folds) {
        o << f.fold << ',' << headline_values(headline(f.test), -1) << ',' << text::round_trip(f.seconds) << '\n';
    }
    std::vector<double> sd;
    for (std::size_t i = 0; i < std::min<std::size_t>(7, r.summary.size()); ++i) sd.push_back(r.summary[i].stddev);
    o << "Mean," << headline_values(headline_means(r.summary), -1) << ',' << text::round_trip(r.total_seconds) << '\n';
    o << "SD," << headline_values(sd, -1) << ",\n";
    return o.str();
}

std::string leaderboard_json(const Leaderboard& b) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : b.rows) {
        rows.push_back({{"model", row.model}, {"metrics", summary_array(row.metrics)}, {"tt_sec", row.total_seconds}});
    }
    return ordered_json{{"leaderboard", rows}}.dump(2) + "\n";
}

std::string leaderboard_csv(const Leaderboard& b) {
    std::ostringstream o;
    o << "Model," << kColumns << ",TT (Sec)\n";
    for (const auto& row : b.rows) {
        o << row.model << ',' << headline_values(headline_means(row.metrics), 4) << ','
          << text::fixed(row.total_seconds, 4) << '\n';
    }
    return o.str();
}

std::string curve_csv(const ValidationCurve& c, bool train_side) {
    std::ostringstream o;
    o << c.param << ',' << (train_side ? "train_score" : "cv_score") << '\n';
    for (const auto& p : c.points) {
        o << text::round_trip(p.value) << ',' << text::round_trip(train_side ? p.train_score : p.cv_score) << '\n';
    }
    return o.str();
}

std::string svg_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                           const std::vector<Series>& series, std::string_view source_data, double x_min,
                           double x_max, double y_min, double y_max) {
    Frame f;
    f.x0 = x_min;
    f.x1 = x_max > x_min ? x_max : x_min + 1.0;
    f.y0 = y_min;
    f.y1 = y_max > y_min ? y_max : y_min + 1.0;
    std::ostringstream o;
    o << svg_open(f, source_data);
    axes(o, f, title, x_label, y_label);
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto colour = kPalette[s % kPalette.size()];
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            o << (i ? " " : "") << num(f.px(series[s].x[i])) << ',' << num(f.py(series[s].y[i]));
        }
        o << "\"/>\n";
        const double ly = f.top + 20.0 * static_cast<double>(s);
        o << "<line x1=\"" << num(f.width - f.right + 10) << "\" y1=\"" << num(ly) << "\" x2=\""
          << num(f.width - f.right + 30) << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << num(f.width - f.right + 35) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
          << escape_xml(series[s].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string svg_stacked_bars(std::string_view title, const ClassPredictionError& e, std::string_view source_data) {
    std::uint64_t tallest = 1;
    for (const auto& row : e.counts) {
        std::uint64_t t = 0;
        for (auto c : row) t += c;
        tallest = std::max(tallest, t);
    }
    Frame f;
    f.x0 = 0.0;
    f.x1 = static_cast<double>(std::max<std::size_t>(e.counts.size(), 1));
    f.y0 = 0.0;
    f.y1 = static_cast<double>(tallest);
    std::ostringstream o;
    o << svg_open(f, source_data);
    axes(o, f, title, "actual class", "number of predicted rows");
    const double slot = (f.width - f.left - f.right) / f.x1;
    for (std::size_t t = 0; t < e.counts.size(); ++t) {
        double base = 0.0;
        for (std::size_t p = 0; p < e.counts[t].size(); ++p) {
            const double c = static_cast<double>(e.counts[t][p]);
            if (c == 0.0) continue;
            const double top = f.py(base + c);
            o << "<rect x=\"" << num(f.px(static_cast<double>(t)) + slot * 0.15) << "\" y=\"" << num(top)
              << "\" width=\"" << num(slot * 0.7) << "\" height=\"" << num(f.py(base) - top) << "\" fill=\""
              << kPalette[p % kPalette.size()] << "\"/>\n";
            base += c;
        }
        o << "<text x=\"" << num(f.px(static_cast<double>(t)) + slot / 2) << "\" y=\"" << num(f.height - f.bottom + 32)
          << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_xml(class_name(t)) << "</text>\n";
    }
    for (std::size_t p = 0; p < e.counts.size(); ++p) {
        const double ly = f.top + 20.0 * static_cast<double>(p);
        o << "<rect x=\"" << num(f.width - f.right + 10) << "\" y=\"" << num(ly - 6) << "\" width=\"14\" height=\"12\" fill=\""
          << kPalette[p % kPalette.size()] << "\"/>\n";
        o << "<text x=\"" << num(f.width - f.right + 30) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">predicted "
          << escape_xml(class_name(p)) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string roc_svg(const RocResult& roc, std::string_view source_data) {
    std::vector<Series> series;
    for (const auto& c : roc.curves) {
        if (c.degenerate) continue;
        series.push_back({class_name(c.cls) + " (AUC " + text::fixed(c.auc, 4) + ")", c.fpr, c.tpr});
    }
    series.push_back({"chance", {0.0, 1.0}, {0.0, 1.0}});
    return svg_line_chart("ROC curves (one-vs-rest)", "false positive rate", "true positive rate", series, source_data,
                          0.0, 1.0, 0.0, 1.0);
}

std::string curve_svg(const ValidationCurve& c, std::string_view source_data) {
    Series train{"training score", {}, {}}, cv{"cross-validation score", {}, {}};
    double lo = 1.0, hi = 0.0;
    for (const auto& p : c.points) {
        train.x.push_back(p.value);
        train.y.push_back(p.train_score);
        cv.x.push_back(p.value);
        cv.y.push_back(p.cv_score);
        lo = std::min({lo, p.train_score, p.cv_score});
        hi = std::max({hi, p.train_score, p.cv_score});
    }
    const double x0 = c.points.empty() ? 0.0 : c.points.front().value;
    const double x1 = c.points.empty() ? 1.0 : c.points.back().value;
    const double y0 = std::max(0.0, lo - 0.05);
    const double y1 = std::max(std::min(1.0, hi + 0.05), y0 + 0.1);
    return svg_line_chart("Validation curve", c.param, "accuracy", {train, cv}, source_data, std::min(x0, x1),
                          std::max(x0, x1), y0, y1);
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace ctgboost::report
