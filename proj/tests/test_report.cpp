#include <sstream>

#include "ctgboost/report.hpp"
#include "doctest.h"
#include "json.hpp"
#include "synthetic.hpp"
#include "xml_check.hpp"

using namespace ctgboost;

namespace {

MetricsReport sample_report() {
    const std::vector<int> t{0, 0, 1, 1, 2, 2, 0}, p{0, 1, 1, 1, 2, 0, 0};
    std::vector<double> s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (int k = 0; k < 3; ++k) s.push_back(k == p[i] ? 0.6 : 0.2 + 0.01 * static_cast<double>(i));
    }
    return evaluate(t, p, s, 3);
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("xml checker rejects the usual mistakes") {
    CHECK_FALSE(testing::xml_error("<svg width=\"1\"><g/></svg>"));
    CHECK(testing::xml_error("<svg><g></svg>"));
    CHECK(testing::xml_error("<svg a=1></svg>"));
    CHECK(testing::xml_error("<svg><!-- a -- b --></svg>"));
    CHECK(testing::xml_error("<a/><b/>"));
}

TEST_CASE("metrics json is flat, ordered and parseable") {
    const auto doc = nlohmann::ordered_json::parse(report::metrics_json(sample_report()));
    auto it = doc.begin();
    CHECK(it.key() == "accuracy");
    CHECK(doc.at("accuracy").get<double>() == doctest::Approx(5.0 / 7.0));
    CHECK(doc.contains("kappa"));
    CHECK(doc.contains("mcc"));
    CHECK(doc.contains("auc_macro"));
    CHECK(doc.at("n_evaluated") == 7);
    for (const auto& [key, value] : doc.items()) CHECK_FALSE(value.is_object());
}

TEST_CASE("csv emitters have the documented headers") {
    const auto r = sample_report();
    const auto m = lines(report::metrics_csv(r, "gbdt"));
    CHECK(m[0] == "Model,Accuracy,AUC,Recall,Prec.,F1,Kappa,MCC");
    CHECK(m[1].rfind("gbdt,", 0) == 0);

    const auto c = lines(report::confusion_csv(r.cm));
    CHECK(c[0] == "true\\pred,Normal,Suspect,Pathological");
    CHECK(c[1] == "Normal,2,1,0");

    const auto roc = roc_auc_ovr(std::vector<double>{0.9, 0.1, 0.0, 0.2, 0.8, 0.0}, std::vector<int>{0, 1}, 3);
    const auto rc = lines(report::roc_csv(roc.curves[0]));
    CHECK(rc[0] == "threshold,fpr,tpr");
    CHECK(rc[1] == "inf,0,0");
    CHECK(rc.back() == "0.2,1,1");

    const auto e = lines(report::class_error_csv(class_prediction_error(std::vector<int>{0, 2}, std::vector<int>{0, 1})));
    CHECK(e[0] == "true_class,predicted_Normal,predicted_Suspect,predicted_Pathological,total");
    CHECK(e[2] == "Suspect,0,0,1,1");
}

TEST_CASE("summary line mirrors the leaderboard columns") {
    const auto text = report::metrics_summary_line(sample_report(), "gbdt");
    CHECK(text.find("Accuracy") != std::string::npos);
    CHECK(text.find("gbdt") != std::string::npos);
    CHECK(text.find("0.7143") != std::string::npos);
}

TEST_CASE("every svg is well-formed, sized and carries its source data") {
    const auto r = sample_report();
    const std::vector<int> t{0, 0, 1, 1, 2, 2, 0};
    std::vector<double> s(21, 0.0);
    for (std::size_t i = 0; i < 7; ++i) s[i * 3 + static_cast<std::size_t>(t[(i + 1) % 7])] = 1.0;
    const auto roc = roc_auc_ovr(s, t, 3);
    const auto cpe = class_prediction_error(std::vector<int>{0, 1, 2, 2}, std::vector<int>{0, 0, 2, 1});
    ValidationCurve curve{"n_estimators", {{10, 0.9, 0.85}, {50, 0.97, 0.9}, {100, 0.99, 0.91}}};

    const std::vector<std::string> svgs{
        report::roc_svg(roc, "a--b <data> & more"),
        report::svg_stacked_bars("Class prediction error", cpe, report::class_error_csv(cpe)),
        report::curve_svg(curve, report::curve_csv(curve, true)),
        report::svg_line_chart("t", "x", "y", {{"s", {0, 1}, {0, 1}}}, "", 0, 1, 0, 1),
    };
    for (const auto& svg : svgs) {
        const auto err = testing::xml_error(svg);
        CHECK_MESSAGE(!err, (err ? *err : std::string()));
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find(" width=\"") != std::string::npos);
        CHECK(svg.find(" height=\"") != std::string::npos);
        CHECK(svg.find("<!-- source data") != std::string::npos);
    }
    CHECK(svgs[1].find("Suspect") != std::string::npos);
}

TEST_CASE("curve csv is two columns in sweep order") {
    ValidationCurve curve{"num_leaves", {{7, 0.8, 0.7}, {31, 0.95, 0.9}}};
    CHECK(report::curve_csv(curve, false) == "num_leaves,cv_score\n7,0.7\n31,0.9\n");
    CHECK(report::curve_csv(curve, true) == "num_leaves,train_score\n7,0.8\n31,0.95\n");
}
