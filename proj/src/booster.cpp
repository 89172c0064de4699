#include "ctgboost/booster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctgboost/error.hpp"
#include "ctgboost/simd.hpp"

namespace ctgboost {

void GbdtConfig::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) bad("learning_rate must be positive");
    if (num_leaves < 2) bad("num_leaves must be at least 2");
    if (n_estimators < 0) bad("n_estimators must be non-negative");
    if (max_bins < 2 || max_bins > kMaxBins) bad("max_bins must lie in [2, 255]");
    if (min_samples_leaf < 1) bad("min_samples_leaf must be at least 1");
    if (!(min_child_weight >= 0.0)) bad("min_child_weight must be non-negative");
    if (!(min_split_gain >= 0.0)) bad("min_split_gain must be non-negative");
    if (!(reg_alpha >= 0.0) || !(reg_lambda >= 0.0)) bad("regularisation must be non-negative");
}

std::vector<double> softmax(std::span<const double> raw_scores) {
    const double top = *std::max_element(raw_scores.begin(), raw_scores.end());
    std::vector<double> p(raw_scores.size());
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) total += p[k] = std::exp(raw_scores[k] - top);
    for (double& v : p) v /= total;
    return p;
}

double cross_entropy(std::span<const double> raw_scores, int label) {
    const double top = *std::max_element(raw_scores.begin(), raw_scores.end());
    double total = 0.0;
    for (double s : raw_scores) total += std::exp(s - top);
    return std::log(total) + top - raw_scores[static_cast<std::size_t>(label)];
}

GradHess softmax_gradients(std::span<const double> raw_scores, int label) {
    const auto p = softmax(raw_scores);
    std::vector<double> target(p.size(), 0.0);
    target[static_cast<std::size_t>(label)] = 1.0;
    GradHess out{std::vector<double>(p.size()), std::vector<double>(p.size())};
    simd::softmax_grad_hess(p, target, out.g, out.h);
    return out;
}

int argmax(std::span<const double> values) {
    return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

namespace {

double mean_loss(const std::vector<double>& scores, std::span<const int> labels, std::size_t K) {
    const std::size_t n = labels.size();
    std::vector<double> row(K);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < K; ++k) row[k] = scores[k * n + i];
        total += cross_entropy(row, labels[i]);
    }
    return total / static_cast<double>(n);
}

}  // namespace

BoostedModel train(const Dataset& ds, const GbdtConfig& cfg, TrainObserver* observer, const FeatureSchema& schema) {
    cfg.validate();
    if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "cannot train on an empty dataset");
    const ClassCounts counts = class_counts(ds);
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
        throw Error(ErrorKind::SingleClassDataset, "training data must contain at least two classes");
    }

    constexpr auto K = static_cast<std::size_t>(kNumClasses);
    const std::size_t n = ds.size();

    BoostedModel model;
    model.config = cfg;
    model.n_classes = kNumClasses;
    model.bin_mapper = BinMapper::fit(ds.features(), ds.n_features(), cfg.max_bins);
    if (schema.predictors.size() == ds.n_features()) {
        model.feature_names = schema.predictors;
    } else {
        for (std::size_t f = 0; f < ds.n_features(); ++f) model.feature_names.push_back("f" + std::to_string(f));
    }
    model.class_names.assign(kClassNames.begin(), kClassNames.end());
    for (std::size_t k = 0; k < K; ++k) {
        // An absent class keeps a finite, very negative prior score.
        const double prior = static_cast<double>(counts[k]) / static_cast<double>(n);
        model.init_scores.push_back(std::log(std::max(prior, 1e-15)));
    }

    const BinnedMatrix X(model.bin_mapper, ds.features(), n);

    // Class-major layouts: [k * n + i].
    std::vector<double> scores(K * n), proba(K * n), target(K * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < K; ++k) scores[k * n + i] = model.init_scores[k];
        target[static_cast<std::size_t>(ds.label(i)) * n + i] = 1.0;
    }
    std::vector<double> g(K * n), h(K * n), delta(n);
    std::vector<double> row(K);

    if (observer) observer->on_iteration({0, mean_loss(scores, ds.labels(), K)});
    model.trees.reserve(static_cast<std::size_t>(cfg.n_estimators) * K);

    for (int iter = 1; iter <= cfg.n_estimators; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < K; ++k) row[k] = scores[k * n + i];
            const auto p = softmax(row);
            for (std::size_t k = 0; k < K; ++k) proba[k * n + i] = p[k];
        }
        simd::softmax_grad_hess(proba, target, g, h);

        for (std::size_t k = 0; k < K; ++k) {
            const std::span<const double> gk(g.data() + k * n, n);
            const std::span<const double> hk(h.data() + k * n, n);
            GrownTree grown = grow_tree_leafwise(X, model.bin_mapper, gk, hk, cfg, observer);
            for (std::size_t i = 0; i < n; ++i) delta[i] = grown.tree.leaf_value[grown.leaf_of_sample[i]];
            simd::scale_add(cfg.learning_rate, delta, std::span<double>(scores.data() + k * n, n));
            model.trees.push_back(std::move(grown.tree));
        }
        if (observer) observer->on_iteration({iter, mean_loss(scores, ds.labels(), K)});
    }
    return model;
}

std::vector<double> predict_raw(const BoostedModel& model, std::span<const double> row) {
    if (row.size() != model.bin_mapper.n_features()) {
        throw Error(ErrorKind::LengthMismatch, "row has " + std::to_string(row.size()) + " values, model expects " +
                                                   std::to_string(model.bin_mapper.n_features()));
    }
    for (double v : row) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "prediction input contains a non-finite value");
    }
    std::vector<BinIndex> bins(row.size());
    for (std::size_t f = 0; f < row.size(); ++f) bins[f] = model.bin_mapper.bin(f, row[f]);

    std::vector<double> scores = model.init_scores;
    const double lr = model.config.learning_rate;
    for (std::size_t it = 0; it < model.n_iterations(); ++it) {
        for (int k = 0; k < model.n_classes; ++k) {
            const Tree& t = model.tree(it, k);
            scores[static_cast<std::size_t>(k)] += lr * t.leaf_value[t.leaf_for_bins(bins)];
        }
    }
    return scores;
}

std::vector<double> predict_proba(const BoostedModel& model, std::span<const double> row) {
    return softmax(predict_raw(model, row));
}

int predict(const BoostedModel& model, std::span<const double> row) { return argmax(predict_proba(model, row)); }

}  // namespace ctgboost
