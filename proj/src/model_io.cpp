#include "ctgboost/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ctgboost/error.hpp"
#include "json.hpp"

namespace ctgboost {

using nlohmann::json;

namespace {

json config_to_json(const GbdtConfig& c) {
    return json{
        {"learning_rate", c.learning_rate},   {"num_leaves", c.num_leaves},
        {"max_depth", c.max_depth},           {"min_samples_leaf", c.min_samples_leaf},
        {"min_child_weight", c.min_child_weight}, {"min_split_gain", c.min_split_gain},
        {"n_estimators", c.n_estimators},     {"max_bins", c.max_bins},
        {"seed", c.seed},                     {"reg_alpha", c.reg_alpha},
        {"reg_lambda", c.reg_lambda},
    };
}

GbdtConfig config_from_json(const json& j) {
    GbdtConfig c;
    c.learning_rate = j.at("learning_rate").get<double>();
    c.num_leaves = j.at("num_leaves").get<int>();
    c.max_depth = j.at("max_depth").get<int>();
    c.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    c.min_child_weight = j.at("min_child_weight").get<double>();
    c.min_split_gain = j.at("min_split_gain").get<double>();
    c.n_estimators = j.at("n_estimators").get<int>();
    c.max_bins = j.at("max_bins").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.reg_alpha = j.at("reg_alpha").get<double>();
    c.reg_lambda = j.at("reg_lambda").get<double>();
    return c;
}

json tree_to_json(const Tree& t) {
    return json{
        {"split_feature", t.split_feature}, {"split_bin", t.split_bin},       {"threshold", t.threshold},
        {"left_child", t.left_child},       {"right_child", t.right_child},   {"split_gain", t.split_gain},
        {"leaf_value", t.leaf_value},       {"leaf_count", t.leaf_count},     {"leaf_hessian", t.leaf_hessian},
    };
}

Tree tree_from_json(const json& j) {
    Tree t;
    j.at("split_feature").get_to(t.split_feature);
    j.at("split_bin").get_to(t.split_bin);
    j.at("threshold").get_to(t.threshold);
    j.at("left_child").get_to(t.left_child);
    j.at("right_child").get_to(t.right_child);
    j.at("split_gain").get_to(t.split_gain);
    j.at("leaf_value").get_to(t.leaf_value);
    j.at("leaf_count").get_to(t.leaf_count);
    j.at("leaf_hessian").get_to(t.leaf_hessian);
    return t;
}

}  // namespace

std::string model_to_json(const BoostedModel& m) {
    json trees = json::array();
    for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
    const json doc{
        {"format", kModelFormat},
        {"config", config_to_json(m.config)},
        {"n_classes", m.n_classes},
        {"class_names", m.class_names},
        {"feature_names", m.feature_names},
        {"init_scores", m.init_scores},
        {"bin_thresholds", m.bin_mapper.all_thresholds()},
        {"leaf_values_scaled_by_learning_rate", false},
        {"trees", trees},
    };
    return doc.dump(1) + "\n";
}

BoostedModel model_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptModel, std::string("unparsable model document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string()) {
        throw Error(ErrorKind::CorruptModel, "missing format tag");
    }
    if (const auto tag = doc["format"].get<std::string>(); tag != kModelFormat) {
        throw Error(ErrorKind::VersionMismatch, "expected " + std::string(kModelFormat) + ", found " + tag);
    }

    BoostedModel m;
    try {
        m.config = config_from_json(doc.at("config"));
        m.n_classes = doc.at("n_classes").get<int>();
        doc.at("class_names").get_to(m.class_names);
        doc.at("feature_names").get_to(m.feature_names);
        doc.at("init_scores").get_to(m.init_scores);
        m.bin_mapper = BinMapper(doc.at("bin_thresholds").get<std::vector<std::vector<double>>>());
        if (doc.at("leaf_values_scaled_by_learning_rate").get<bool>()) {
            throw Error(ErrorKind::CorruptModel, "pre-scaled leaf values are not supported");
        }
        for (const auto& jt : doc.at("trees")) m.trees.push_back(tree_from_json(jt));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::CorruptModel, e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CorruptModel) throw;
        throw Error(ErrorKind::CorruptModel, e.what());
    }

    try {
        m.config.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::CorruptModel, e.what());
    }
    const std::size_t n_features = m.bin_mapper.n_features();
    if (m.n_classes < 2 || m.init_scores.size() != static_cast<std::size_t>(m.n_classes) ||
        m.class_names.size() != static_cast<std::size_t>(m.n_classes) || m.feature_names.size() != n_features ||
        m.trees.size() % static_cast<std::size_t>(m.n_classes) != 0) {
        throw Error(ErrorKind::CorruptModel, "inconsistent model dimensions");
    }
    for (double s : m.init_scores) {
        if (!std::isfinite(s)) throw Error(ErrorKind::CorruptModel, "non-finite initial score");
    }
    for (const auto& t : m.trees) {
        t.validate(n_features);
        for (std::size_t i = 0; i < t.n_internal(); ++i) {
            const auto f = t.split_feature[i];
            if (t.split_bin[i] >= m.bin_mapper.n_bins(f) - 1) throw Error(ErrorKind::CorruptModel, "split bin out of range");
        }
    }
    return m;
}

void save_model(const BoostedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << model_to_json(model);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

BoostedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

}  // namespace ctgboost
