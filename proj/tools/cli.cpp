#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ctgboost/baselines.hpp"
#include "ctgboost/booster.hpp"
#include "ctgboost/dataset.hpp"
#include "ctgboost/error.hpp"
#include "ctgboost/harness.hpp"
#include "ctgboost/model_io.hpp"
#include "ctgboost/report.hpp"
#include "ctgboost/smote.hpp"

namespace ctgboost::cli {
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string data;
    std::string model_path;
    std::string out = "out";
    std::uint64_t seed = 123;
    double test_fraction = 0.2;
    std::string smote_scope = "fold";
    int folds = 20;
    std::optional<double> learning_rate;
    std::optional<int> num_leaves;
    std::optional<int> n_estimators;
    std::optional<int> min_samples_leaf;
    std::vector<std::string> models{"gbdt", "cart", "knn", "dummy"};
    std::string param = "n_estimators";
    std::vector<double> values{1, 5, 10, 25, 50, 100};
    std::vector<std::string> formats{"csv", "json", "svg"};
};

bool wants(const Options& o, std::string_view format) {
    return std::find(o.formats.begin(), o.formats.end(), format) != o.formats.end();
}

GbdtConfig gbdt_config(const Options& o) {
    GbdtConfig c;
    c.seed = o.seed;
    if (o.learning_rate) c.learning_rate = *o.learning_rate;
    if (o.num_leaves) c.num_leaves = *o.num_leaves;
    if (o.n_estimators) c.n_estimators = *o.n_estimators;
    if (o.min_samples_leaf) c.min_samples_leaf = *o.min_samples_leaf;
    c.validate();
    return c;
}

ModelSpec model_spec(const Options& o, std::string_view name) {
    ModelSpec spec = ModelSpec::of(parse_model_kind(name));
    spec.gbdt = gbdt_config(o);
    spec.seed = o.seed;
    return spec;
}

CvConfig cv_config(const Options& o) {
    CvConfig c;
    c.folds = o.folds;
    c.seed = o.seed;
    c.smote_scope = parse_smote_scope(o.smote_scope);
    c.smote.seed = o.seed;
    return c;
}

fs::path prepare_out(const Options& o) {
    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void append_run_log(const fs::path& dir, std::string_view command, double seconds) {
    std::ofstream log(dir / "run.log", std::ios::app);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    log << stamp << ' ' << command << " seconds=" << seconds << '\n';
}

struct Evaluation {
    MetricsReport metrics;
    RocResult roc;
    ClassPredictionError class_error;
    std::vector<int> predictions;
};

Evaluation evaluate_model(const BoostedModel& model, const Dataset& ds) {
    Evaluation ev;
    std::vector<double> scores;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto p = predict_proba(model, ds.row(i));
        scores.insert(scores.end(), p.begin(), p.end());
        ev.predictions.push_back(argmax(p));
    }
    ev.metrics = evaluate(ds.labels(), ev.predictions, scores, kNumClasses);
    ev.roc = roc_auc_ovr(scores, ds.labels(), kNumClasses);
    ev.class_error = class_prediction_error(ev.predictions, ds.labels());
    return ev;
}

void write_evaluation(const Evaluation& ev, const fs::path& dir, const Options& o, bool all_formats) {
    if (all_formats || wants(o, "json")) report::write_text(dir / "metrics.json", report::metrics_json(ev.metrics));
    if (all_formats || wants(o, "csv")) {
        report::write_text(dir / "metrics.csv", report::metrics_csv(ev.metrics, "gbdt"));
        report::write_text(dir / "confusion.csv", report::confusion_csv(ev.metrics.cm));
        report::write_text(dir / "class_error.csv", report::class_error_csv(ev.class_error));
    }
    std::string roc_data;
    for (const auto& c : ev.roc.curves) {
        if (c.degenerate) continue;
        const std::string csv = report::roc_csv(c);
        roc_data += "# " + std::string(kClassNames[c.cls]) + "\n" + csv;
        if (all_formats || wants(o, "csv")) {
            report::write_text(dir / ("roc_" + std::string(kClassNames[c.cls]) + ".csv"), csv);
        }
    }
    if (all_formats || wants(o, "svg")) {
        report::write_text(dir / "roc.svg", report::roc_svg(ev.roc, roc_data));
        report::write_text(dir / "class_error.svg",
                           report::svg_stacked_bars("Class prediction error", ev.class_error,
                                                    report::class_error_csv(ev.class_error)));
    }
}

Dataset maybe_smote(const Dataset& ds, const Options& o) {
    if (parse_smote_scope(o.smote_scope) == SmoteScope::Off) return ds;
    return smote(ds, SmoteConfig{5, o.seed});
}

int cmd_validate(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    const auto counts = class_counts(ds);
    out << "rows: " << ds.size() << '\n';
    for (std::size_t k = 0; k < counts.size(); ++k) out << kClassNames[k] << ": " << counts[k] << '\n';
    return kOk;
}

int cmd_split(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    const SplitPair split = stratified_split(ds, o.test_fraction, o.seed);
    const fs::path dir = prepare_out(o);
    write_csv(split.train, dir / "train.csv");
    write_csv(split.test, dir / "test.csv");
    out << "train: " << split.train.size() << " rows, test: " << split.test.size() << " rows\n";
    return kOk;
}

int cmd_train(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    const GbdtConfig cfg = gbdt_config(o);
    const fs::path dir = prepare_out(o);
    const BoostedModel model = train(maybe_smote(ds, o), cfg);
    save_model(model, dir / "model.json");
    out << "model written to " << (dir / "model.json").string() << '\n';
    return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    const BoostedModel model = load_model(o.model_path);
    const Dataset ds = load_csv(o.data);
    const fs::path dir = prepare_out(o);
    const Evaluation ev = evaluate_model(model, ds);
    write_evaluation(ev, dir, o, false);
    out << report::metrics_summary_line(ev.metrics, "gbdt");
    return kOk;
}

int cmd_cv(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    const CvConfig cfg = cv_config(o);
    const fs::path dir = prepare_out(o);
    for (const auto& name : o.models) {
        const CvReport r = kfold_cv(ds, model_spec(o, name), cfg);
        if (wants(o, "csv")) report::write_text(dir / ("cv_" + r.model + ".csv"), report::cv_report_csv(r));
        if (wants(o, "json")) report::write_text(dir / ("cv_" + r.model + ".json"), report::cv_report_json(r));
        out << r.model << ": mean accuracy " << r.metric("accuracy").mean << " (sd " << r.metric("accuracy").stddev
            << ") over " << cfg.folds << " folds\n";
    }
    return kOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    std::vector<ModelSpec> specs;
    for (const auto& name : o.models) specs.push_back(model_spec(o, name));
    const fs::path dir = prepare_out(o);
    const Leaderboard board = compare_models(ds, specs, cv_config(o));
    const std::string csv = report::leaderboard_csv(board);
    if (wants(o, "csv")) report::write_text(dir / "leaderboard.csv", csv);
    if (wants(o, "json")) report::write_text(dir / "leaderboard.json", report::leaderboard_json(board));
    out << csv;
    return kOk;
}

int cmd_curve(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    const fs::path dir = prepare_out(o);
    const ValidationCurve c = validation_curve(ds, model_spec(o, "gbdt"), o.param, o.values, cv_config(o));
    const std::string train_csv = report::curve_csv(c, true);
    const std::string cv_csv = report::curve_csv(c, false);
    if (wants(o, "csv")) {
        report::write_text(dir / ("curve_" + c.param + "_train.csv"), train_csv);
        report::write_text(dir / ("curve_" + c.param + "_cv.csv"), cv_csv);
    }
    if (wants(o, "svg")) {
        report::write_text(dir / ("curve_" + c.param + ".svg"), report::curve_svg(c, train_csv + cv_csv));
    }
    for (const auto& p : c.points) {
        out << c.param << '=' << p.value << " train=" << p.train_score << " cv=" << p.cv_score << '\n';
    }
    return kOk;
}

int cmd_pipeline(const Options& o, std::ostream& out) {
    const Dataset ds = load_csv(o.data);
    const GbdtConfig cfg = gbdt_config(o);
    const fs::path dir = prepare_out(o);
    const SplitPair split = stratified_split(ds, o.test_fraction, o.seed);
    const BoostedModel model = train(maybe_smote(split.train, o), cfg);
    save_model(model, dir / "model.json");
    const Evaluation ev = evaluate_model(model, split.test);
    write_evaluation(ev, dir, o, true);
    out << report::metrics_summary_line(ev.metrics, "gbdt");
    return kOk;
}

int exit_code_for(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::Data: return kDataError;
        case ErrorCategory::Config: return kUsage;
        case ErrorCategory::Training: return kTrainingError;
    }
    return kTrainingError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Gradient-boosted fetal health classification on cardiotocography data", "ctg_boost"};
    app.require_subcommand(1);
    // Any flag may come from a TOML/INI file; subcommand options go under [pipeline], [compare], ...
    app.set_config("--config", "", "TOML/INI file supplying option values");

    auto add_data = [&](CLI::App* sub) {
        sub->add_option("--data", o.data, "CSV file with the 21 predictors and fetal_health")
            ->required()
            ->check(CLI::ExistingFile);
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output directory (created if absent)"); };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Random seed"); };
    auto add_gbdt = [&](CLI::App* sub) {
        sub->add_option("--learning-rate", o.learning_rate, "Boosting learning rate");
        sub->add_option("--num-leaves", o.num_leaves, "Maximum leaves per tree");
        sub->add_option("--n-estimators", o.n_estimators, "Boosting iterations");
        sub->add_option("--min-samples-leaf", o.min_samples_leaf, "Minimum samples per leaf");
    };
    auto add_smote = [&](CLI::App* sub) {
        sub->add_option("--smote-scope", o.smote_scope, "SMOTE placement")
            ->check(CLI::IsMember({"fold", "global", "off"}));
    };
    auto add_cv = [&](CLI::App* sub) { sub->add_option("--folds", o.folds, "Cross-validation folds"); };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.formats, "Report formats to emit")
            ->delimiter(',')
            ->check(CLI::IsMember({"csv", "json", "svg"}));
    };

    auto* validate = app.add_subcommand("validate", "Check a CSV against the schema and print class counts");
    add_data(validate);

    auto* split = app.add_subcommand("split", "Write a stratified train/test split");
    add_data(split);
    add_out(split);
    add_seed(split);
    split->add_option("--test-fraction", o.test_fraction, "Hold-out fraction")->check(CLI::Range(0.0, 1.0));

    auto* train_cmd = app.add_subcommand("train", "Train a boosted model (SMOTE unless --smote-scope off)");
    add_data(train_cmd);
    add_out(train_cmd);
    add_seed(train_cmd);
    add_gbdt(train_cmd);
    add_smote(train_cmd);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a saved model on a CSV");
    add_data(evaluate_cmd);
    add_out(evaluate_cmd);
    add_format(evaluate_cmd);
    evaluate_cmd->add_option("--model", o.model_path, "Model file")->required()->check(CLI::ExistingFile);

    auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
    add_data(cv);
    add_out(cv);
    add_seed(cv);
    add_gbdt(cv);
    add_smote(cv);
    add_cv(cv);
    add_format(cv);
    cv->add_option("--models", o.models, "Comma-separated models")->delimiter(',');

    auto* compare = app.add_subcommand("compare", "Cross-validated leaderboard over several models");
    add_data(compare);
    add_out(compare);
    add_seed(compare);
    add_gbdt(compare);
    add_smote(compare);
    add_cv(compare);
    add_format(compare);
    compare->add_option("--models", o.models, "Comma-separated models")->delimiter(',');

    auto* curve = app.add_subcommand("curve", "Validation curve over one booster hyperparameter");
    add_data(curve);
    add_out(curve);
    add_seed(curve);
    add_gbdt(curve);
    add_smote(curve);
    add_cv(curve);
    add_format(curve);
    curve->add_option("--param", o.param, "n_estimators, num_leaves or learning_rate");
    curve->add_option("--values", o.values, "Comma-separated values")->delimiter(',');

    auto* pipeline = app.add_subcommand("pipeline", "Split, SMOTE, train, evaluate and write every report");
    add_data(pipeline);
    add_out(pipeline);
    add_seed(pipeline);
    add_gbdt(pipeline);
    add_smote(pipeline);
    pipeline->add_option("--test-fraction", o.test_fraction, "Hold-out fraction")->check(CLI::Range(0.0, 1.0));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    CLI::App* chosen = app.get_subcommands().front();
    try {
        int code = kOk;
        const std::string& name = chosen->get_name();
        if (name == "validate") code = cmd_validate(o, out);
        else if (name == "split") code = cmd_split(o, out);
        else if (name == "train") code = cmd_train(o, out);
        else if (name == "evaluate") code = cmd_evaluate(o, out);
        else if (name == "cv") code = cmd_cv(o, out);
        else if (name == "compare") code = cmd_compare(o, out);
        else if (name == "curve") code = cmd_curve(o, out);
        else if (name == "pipeline") code = cmd_pipeline(o, out);
        if (name != "validate") {
            append_run_log(fs::path(o.out), name,
                           std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
        }
        return code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kTrainingError;
    }
}

}  // namespace ctgboost::cli
