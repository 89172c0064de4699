#include "ctgboost/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "ctgboost/error.hpp"
#include "ctgboost/simd.hpp"

namespace ctgboost {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Gbdt: return "gbdt";
        case ModelKind::Dummy: return "dummy";
        case ModelKind::Cart: return "cart";
        case ModelKind::Knn: return "knn";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "gbdt" || name == "lightgbm") return ModelKind::Gbdt;
    if (name == "dummy") return ModelKind::Dummy;
    if (name == "cart" || name == "dt") return ModelKind::Cart;
    if (name == "knn") return ModelKind::Knn;
    throw Error(ErrorKind::UnknownParam, "unknown model '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
    switch (kind) {
        case ModelKind::Gbdt: gbdt.validate(); break;
        case ModelKind::Cart:
            if (cart.min_samples_leaf < 1) throw Error(ErrorKind::InvalidConfig, "cart min_samples_leaf must be >= 1");
            break;
        case ModelKind::Knn:
            if (knn.k < 1) throw Error(ErrorKind::InvalidConfig, "knn k must be >= 1");
            break;
        case ModelKind::Dummy: break;
    }
}

// ---------------------------------------------------------------- dummy

DummyModel dummy_fit(const Dataset& train) {
    if (train.empty()) throw Error(ErrorKind::EmptyDataset, "dummy classifier needs training rows");
    DummyModel m;
    m.counts = class_counts(train);
    m.mode = static_cast<int>(std::max_element(m.counts.begin(), m.counts.end()) - m.counts.begin());
    return m;
}

std::vector<int> dummy_fit_predict(const Dataset& train, std::size_t n_test_rows) {
    return std::vector<int>(n_test_rows, dummy_fit(train).mode);
}

// ---------------------------------------------------------------- cart

std::size_t CartModel::n_leaves() const {
    return static_cast<std::size_t>(std::count(feature.begin(), feature.end(), -1));
}

std::size_t CartModel::depth() const {
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [node, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        if (feature[node] >= 0) {
            stack.emplace_back(static_cast<std::size_t>(left[node]), d + 1);
            stack.emplace_back(static_cast<std::size_t>(right[node]), d + 1);
        }
    }
    return best;
}

std::size_t CartModel::leaf_for(std::span<const double> row) const {
    std::size_t node = 0;
    while (feature[node] >= 0) {
        node = static_cast<std::size_t>(row[static_cast<std::size_t>(feature[node])] <= threshold[node] ? left[node]
                                                                                                       : right[node]);
    }
    return node;
}

namespace {

struct CartSplit {
    int feature = -1;
    double threshold = 0.0;
    // Σ_L c²/n_L + Σ_R c²/n_R held as an exact fraction num/den.
    __int128 num = 0;
    __int128 den = 1;
};

ClassCounts counts_of(const Dataset& ds, std::span<const std::size_t> rows) {
    ClassCounts c{};
    for (std::size_t r : rows) ++c[static_cast<std::size_t>(ds.label(r))];
    return c;
}

// Maximising the fraction minimises weighted gini. Zero-reduction splits are
// still taken when nothing better exists, so impure nodes with distinct
// feature vectors always split (XOR needs this at the root).
CartSplit find_cart_split(const Dataset& ds, std::span<const std::size_t> rows, const ClassCounts& total,
                          std::size_t min_leaf) {
    const std::size_t m = rows.size();
    CartSplit best;
    std::vector<std::pair<double, std::size_t>> order(m);
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        for (std::size_t i = 0; i < m; ++i) order[i] = {ds.row(rows[i])[f], rows[i]};
        std::sort(order.begin(), order.end());
        ClassCounts left{};
        for (std::size_t i = 0; i + 1 < m; ++i) {
            ++left[static_cast<std::size_t>(ds.label(order[i].second))];
            if (order[i].first == order[i + 1].first) continue;
            const std::size_t nl = i + 1;
            const std::size_t nr = m - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            __int128 sl = 0, sr = 0;
            for (std::size_t c = 0; c < total.size(); ++c) {
                const auto cl = static_cast<__int128>(left[c]);
                const auto cr = static_cast<__int128>(total[c] - left[c]);
                sl += cl * cl;
                sr += cr * cr;
            }
            const __int128 num = sl * static_cast<__int128>(nr) + sr * static_cast<__int128>(nl);
            const __int128 den = static_cast<__int128>(nl) * static_cast<__int128>(nr);
            if (best.feature < 0 || num * best.den > best.num * den) {
                const double lo = order[i].first;
                const double hi = order[i + 1].first;
                const double mid = std::midpoint(lo, hi);
                best = CartSplit{static_cast<int>(f), mid < hi ? mid : lo, num, den};
            }
        }
    }
    return best;
}

}  // namespace

CartModel cart_train(const Dataset& train, const CartParams& params) {
    if (train.empty()) throw Error(ErrorKind::EmptyDataset, "decision tree needs training rows");
    if (params.min_samples_leaf < 1) throw Error(ErrorKind::InvalidConfig, "cart min_samples_leaf must be >= 1");
    const auto min_leaf = static_cast<std::size_t>(params.min_samples_leaf);

    CartModel model;
    auto add_node = [&](const ClassCounts& c) {
        model.feature.push_back(-1);
        model.threshold.push_back(0.0);
        model.left.push_back(-1);
        model.right.push_back(-1);
        model.counts.push_back(c);
        return model.feature.size() - 1;
    };

    std::vector<std::size_t> all(train.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack;
    stack.emplace_back(add_node(counts_of(train, all)), std::move(all));

    while (!stack.empty()) {
        auto [node, rows] = std::move(stack.back());
        stack.pop_back();
        const ClassCounts total = model.counts[node];
        const bool pure = std::count_if(total.begin(), total.end(), [](std::size_t c) { return c > 0; }) <= 1;
        if (pure || rows.size() < 2 * min_leaf) continue;

        const CartSplit split = find_cart_split(train, rows, total, min_leaf);
        if (split.feature < 0) continue;

        std::vector<std::size_t> lrows, rrows;
        for (std::size_t r : rows) {
            (train.row(r)[static_cast<std::size_t>(split.feature)] <= split.threshold ? lrows : rrows).push_back(r);
        }
        model.feature[node] = split.feature;
        model.threshold[node] = split.threshold;
        const std::size_t l = add_node(counts_of(train, lrows));
        const std::size_t r = add_node(counts_of(train, rrows));
        model.left[node] = static_cast<int>(l);
        model.right[node] = static_cast<int>(r);
        stack.emplace_back(r, std::move(rrows));
        stack.emplace_back(l, std::move(lrows));
    }
    return model;
}

std::vector<double> cart_predict_proba(const CartModel& model, std::span<const double> row) {
    const ClassCounts& c = model.counts[model.leaf_for(row)];
    const double n = static_cast<double>(std::accumulate(c.begin(), c.end(), std::size_t{0}));
    std::vector<double> p(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) p[k] = static_cast<double>(c[k]) / n;
    return p;
}

// ---------------------------------------------------------------- knn

KnnModel knn_fit(const Dataset& train, const KnnParams& params) {
    if (params.k < 1) throw Error(ErrorKind::InvalidConfig, "knn k must be >= 1");
    if (train.size() < static_cast<std::size_t>(params.k)) {
        throw Error(ErrorKind::TooFewSamples, "knn needs at least k = " + std::to_string(params.k) + " training rows");
    }
    KnnModel m;
    m.params = params;
    m.n_features = train.n_features();
    m.mean.assign(m.n_features, 0.0);
    m.inv_scale.assign(m.n_features, 1.0);
    const double n = static_cast<double>(train.size());
    if (params.standardize) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            for (std::size_t f = 0; f < m.n_features; ++f) m.mean[f] += train.row(i)[f];
        }
        for (double& v : m.mean) v /= n;
        std::vector<double> var(m.n_features, 0.0);
        for (std::size_t i = 0; i < train.size(); ++i) {
            for (std::size_t f = 0; f < m.n_features; ++f) {
                const double d = train.row(i)[f] - m.mean[f];
                var[f] += d * d;
            }
        }
        for (std::size_t f = 0; f < m.n_features; ++f) {
            const double sd = std::sqrt(var[f] / n);
            m.inv_scale[f] = sd > 0.0 ? 1.0 / sd : 0.0;
        }
    }
    m.points.assign(train.features().begin(), train.features().end());
    for (std::size_t i = 0; i < train.size(); ++i) {
        simd::standardize(std::span<double>(m.points.data() + i * m.n_features, m.n_features), m.mean, m.inv_scale);
    }
    m.labels.assign(train.labels().begin(), train.labels().end());
    m.row_ids.assign(train.row_ids().begin(), train.row_ids().end());
    return m;
}

std::vector<double> knn_predict_proba(const KnnModel& m, std::span<const double> row) {
    if (row.size() != m.n_features) throw Error(ErrorKind::LengthMismatch, "query width differs from training data");
    std::vector<double> query(row.begin(), row.end());
    simd::standardize(query, m.mean, m.inv_scale);

    const std::size_t n = m.labels.size();
    std::vector<std::pair<double, std::uint64_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> p(m.points.data() + i * m.n_features, m.n_features);
        dist[i] = {simd::squared_distance(query, p), m.row_ids[i]};
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const auto k = static_cast<std::size_t>(m.params.k);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

    std::vector<double> votes(static_cast<std::size_t>(kNumClasses), 0.0);
    for (std::size_t j = 0; j < k; ++j) votes[static_cast<std::size_t>(m.labels[idx[j]])] += 1.0;
    for (double& v : votes) v /= static_cast<double>(k);
    return votes;
}

int knn_predict(const Dataset& train, const KnnParams& params, std::span<const double> row) {
    return argmax(knn_predict_proba(knn_fit(train, params), row));
}

// ---------------------------------------------------------------- dispatch

FittedModel fit_model(const ModelSpec& spec, const Dataset& train) {
    spec.validate();
    switch (spec.kind) {
        case ModelKind::Gbdt: return ctgboost::train(train, spec.gbdt);
        case ModelKind::Dummy: return dummy_fit(train);
        case ModelKind::Cart: return cart_train(train, spec.cart);
        case ModelKind::Knn: return knn_fit(train, spec.knn);
    }
    throw Error(ErrorKind::UnknownParam, "unhandled model kind");
}

std::vector<double> predict_proba(const FittedModel& model, std::span<const double> row) {
    struct Visitor {
        std::span<const double> row;
        std::vector<double> operator()(const BoostedModel& m) const { return ctgboost::predict_proba(m, row); }
        std::vector<double> operator()(const DummyModel& m) const {
            const double n = static_cast<double>(std::accumulate(m.counts.begin(), m.counts.end(), std::size_t{0}));
            std::vector<double> p;
            for (std::size_t c : m.counts) p.push_back(static_cast<double>(c) / n);
            return p;
        }
        std::vector<double> operator()(const CartModel& m) const { return cart_predict_proba(m, row); }
        std::vector<double> operator()(const KnnModel& m) const { return knn_predict_proba(m, row); }
    };
    return std::visit(Visitor{row}, model);
}

int predict(const FittedModel& model, std::span<const double> row) { return argmax(predict_proba(model, row)); }

}  // namespace ctgboost
