#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctgboost/booster.hpp"
#include "ctgboost/error.hpp"
#include "ctgboost/parallel.hpp"
#include "ctgboost/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace ctgboost;

namespace {

struct LossRecorder : TrainObserver {
    std::vector<double> losses;
    void on_iteration(const IterationEvent& e) override { losses.push_back(e.mean_loss); }
};

// Independent walk over the flat arrays, recursing on child links.
double descend(const Tree& t, int link, std::span<const double> row) {
    if (link < 0) return t.leaf_value[static_cast<std::size_t>(~link)];
    const auto n = static_cast<std::size_t>(link);
    return descend(t, row[t.split_feature[n]] <= t.threshold[n] ? t.left_child[n] : t.right_child[n], row);
}

std::vector<double> raw_oracle(const BoostedModel& m, std::span<const double> row) {
    std::vector<double> s = m.init_scores;
    for (std::size_t it = 0; it < m.n_iterations(); ++it) {
        for (int k = 0; k < m.n_classes; ++k) {
            const Tree& t = m.tree(it, k);
            s[static_cast<std::size_t>(k)] += m.config.learning_rate * descend(t, t.n_internal() > 0 ? 0 : ~0, row);
        }
    }
    return s;
}

std::size_t tree_depth(const Tree& t, int link) {
    if (link < 0) return 0;
    const auto n = static_cast<std::size_t>(link);
    return 1 + std::max(tree_depth(t, t.left_child[n]), tree_depth(t, t.right_child[n]));
}

GbdtConfig quick_config(int n_estimators) {
    GbdtConfig cfg;
    cfg.n_estimators = n_estimators;
    return cfg;
}

}  // namespace

TEST_CASE("softmax is normalized and shift invariant") {
    const std::vector<double> raw{1.0, -2.0, 0.5};
    const auto p = softmax(raw);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
    const auto q = softmax(std::vector<double>{1001.0, 998.0, 1000.5});
    for (std::size_t k = 0; k < 3; ++k) CHECK(p[k] == doctest::Approx(q[k]).epsilon(1e-12));
    CHECK(argmax(raw) == 0);
    CHECK(argmax(std::vector<double>{1.0, 3.0, 3.0}) == 1);
}

TEST_CASE("softmax gradients match finite differences") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> raw(3);
        for (auto& r : raw) r = 6.0 * rng.unit() - 3.0;
        const int label = static_cast<int>(rng.index(3));
        const auto gh = softmax_gradients(raw, label);
        const auto fd = testing::fd_gradient(raw, label, 1e-5);
        const auto fdh = testing::fd_hessian_diag(raw, label, 1e-4);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(gh.g[k] - fd[k]) <= 1e-6 * std::abs(fd[k]));
            CHECK(std::abs(gh.h[k] - fdh[k]) <= 1e-6 * std::abs(fdh[k]));
        }
    }
}

TEST_CASE("quantizer resolution and exact integer addition") {
    const GradientQuantizer q(2000);
    CHECK(q.fraction_bits() >= 16);
    CHECK(q.fraction_bits() <= 48);
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double v = 2.0 * rng.unit() - 1.0;
        CHECK(std::abs(q.decode(q.encode(v)) - v) <= std::ldexp(1.0, -q.fraction_bits()));
    }
}

TEST_CASE("histograms equal per-bin sums computed directly") {
    const auto ds = testing::make_ctg_like(3, {120, 30, 20});
    const auto mapper = BinMapper::fit(ds.features(), ds.n_features(), 16);
    const BinnedMatrix X(mapper, ds.features(), ds.size());
    Rng rng(4);
    std::vector<double> g(ds.size()), h(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        g[i] = 2.0 * rng.unit() - 1.0;
        h[i] = rng.unit() * 0.25;
    }
    const GradientQuantizer q(ds.size());
    const auto gq = q.encode_all(g), hq = q.encode_all(h);
    std::vector<std::uint32_t> samples;
    for (std::uint32_t i = 0; i < ds.size(); i += 3) samples.push_back(i);

    Histogram hist(mapper);
    build_histogram(X, samples, gq, hq, hist);
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        for (int b = 0; b < mapper.n_bins(f); ++b) {
            GradSums expect;
            for (auto s : samples) {
                if (X.column(f)[s] == b) expect += GradSums{gq[s], hq[s], 1};
            }
            CHECK(hist.feature(f)[static_cast<std::size_t>(b)] == expect);
        }
    }
}

TEST_CASE("best_split equals exhaustive enumeration") {
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.index(63), d = 1 + rng.index(8);
        std::vector<double> table(n * d);
        for (auto& v : table) v = static_cast<double>(rng.index(10));
        const auto mapper = BinMapper::fit(table, d, 255);
        const BinnedMatrix X(mapper, table, n);
        std::vector<double> g(n), h(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = 2.0 * rng.unit() - 1.0;
            h[i] = rng.unit();
        }
        GbdtConfig cfg;
        cfg.min_samples_leaf = 1 + static_cast<int>(rng.index(5));
        const GradientQuantizer q(n);
        const auto gq = q.encode_all(g), hq = q.encode_all(h);
        std::vector<std::uint32_t> samples(n);
        std::iota(samples.begin(), samples.end(), 0u);
        Histogram hist(mapper);
        build_histogram(X, samples, gq, hq, hist);
        GradSums total;
        for (auto s : samples) total += GradSums{gq[s], hq[s], 1};

        const auto got = best_split(hist, total, cfg, q);
        const auto want = testing::brute_force_split(X, mapper, samples, gq, hq, cfg, q);
        REQUIRE(got.has_value() == want.has_value());
        if (!got) continue;
        CHECK(got->feature == want->feature);
        CHECK(got->bin == want->bin);
        CHECK(got->gain == doctest::Approx(want->gain).epsilon(1e-9));
    }
}

TEST_CASE("zero iterations predict the class priors") {
    const auto ds = testing::make_blobs(1, {60, 30, 10}, 3, 2.0);
    const auto m = train(ds, quick_config(0));
    CHECK(m.trees.empty());
    const auto p = predict_proba(m, ds.row(0));
    CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(p[2] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("one two-leaf iteration matches a hand-computed stump") {
    // Feature 0 separates class 0 (x < 0) from the rest; feature 1 is noise-free constant.
    Dataset ds(2);
    for (int i = 0; i < 40; ++i) ds.push_back(std::vector<double>{i < 20 ? -1.0 - i : 1.0 + i, 5.0}, i < 20 ? 0 : 1 + i % 2, static_cast<std::uint64_t>(i));
    GbdtConfig cfg = quick_config(1);
    cfg.num_leaves = 2;
    cfg.min_samples_leaf = 5;
    const auto m = train(ds, cfg);
    const Tree& t0 = m.tree(0, 0);
    REQUIRE(t0.n_leaves() == 2);
    CHECK(t0.split_feature[0] == 0);
    CHECK(t0.threshold[0] == 10.0);

    // Priors 0.5 / 0.25 / 0.25; class-0 gradient is p - y on each side.
    const double p0 = 0.5;
    const double left_value = -(20 * (p0 - 1.0)) / (20 * p0 * (1 - p0));
    const double right_value = -(20 * p0) / (20 * p0 * (1 - p0));
    CHECK(t0.leaf_value[t0.leaf_for_values(ds.row(0))] == doctest::Approx(left_value).epsilon(1e-6));
    CHECK(t0.leaf_value[t0.leaf_for_values(ds.row(39))] == doctest::Approx(right_value).epsilon(1e-6));
    const auto raw = predict_raw(m, ds.row(0));
    CHECK(raw[0] == doctest::Approx(std::log(0.5) + 0.1 * left_value).epsilon(1e-6));
}

TEST_CASE("separable 60-row toy is fit perfectly") {
    const auto ds = testing::make_blobs(8, {20, 20, 20}, 3, 8.0);
    GbdtConfig cfg = quick_config(30);
    cfg.min_samples_leaf = 3;
    const auto m = train(ds, cfg);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(predict(m, ds.row(i)) == ds.label(i));
}

TEST_CASE("trees respect leaf count, depth and min_samples_leaf") {
    const auto ds = testing::make_ctg_like(21, {300, 60, 40});
    for (int leaves : {2, 7, 31}) {
        for (int depth : {-1, 2, 4}) {
            GbdtConfig cfg = quick_config(5);
            cfg.num_leaves = leaves;
            cfg.max_depth = depth;
            cfg.min_samples_leaf = 10;
            const auto m = train(ds, cfg);
            for (const Tree& t : m.trees) {
                CHECK_NOTHROW(t.validate(ds.n_features()));
                CHECK(t.n_leaves() <= static_cast<std::size_t>(leaves));
                if (depth > 0) CHECK(tree_depth(t, t.n_internal() > 0 ? 0 : ~0) <= static_cast<std::size_t>(depth));
                for (auto c : t.leaf_count) CHECK(c >= 10u);
                CHECK(std::accumulate(t.leaf_count.begin(), t.leaf_count.end(), 0u) == ds.size());
            }
        }
    }
}

TEST_CASE("training loss never increases and matches predict_raw on the training rows") {
    const auto ds = testing::make_ctg_like(2, {400, 80, 50});
    LossRecorder rec;
    const auto m = train(ds, quick_config(40), &rec);
    REQUIRE(rec.losses.size() == 41);
    for (std::size_t i = 1; i < rec.losses.size(); ++i) CHECK(rec.losses[i] <= rec.losses[i - 1] + 1e-9);

    double total = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) total += cross_entropy(predict_raw(m, ds.row(i)), ds.label(i));
    CHECK(total / static_cast<double>(ds.size()) == rec.losses.back());
}

TEST_CASE("predict_raw equals a recursive-descent oracle") {
    const auto ds = testing::make_ctg_like(6, {200, 50, 30});
    const auto m = train(ds, quick_config(15));
    const auto probe = testing::make_ctg_like(7, {30, 10, 10});
    for (std::size_t i = 0; i < probe.size(); ++i) {
        CHECK(predict_raw(m, probe.row(i)) == raw_oracle(m, probe.row(i)));
    }
}

TEST_CASE("training is identical at 1, 2 and 8 worker threads") {
    const auto ds = testing::make_ctg_like(9, {800, 150, 90});
    set_worker_threads(1);
    const auto one = train(ds, quick_config(10));
    set_worker_threads(2);
    const auto two = train(ds, quick_config(10));
    set_worker_threads(8);
    const auto eight = train(ds, quick_config(10));
    set_worker_threads(0);
    CHECK(one == two);
    CHECK(one == eight);
}

TEST_CASE("invalid inputs are rejected with their kinds") {
    const auto ds = testing::make_blobs(1, {10, 10, 10}, 2, 1.0);
    auto kind = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    GbdtConfig bad;
    bad.learning_rate = 0.0;
    CHECK(kind([&] { train(ds, bad); }) == ErrorKind::InvalidConfig);
    bad = {};
    bad.num_leaves = 1;
    CHECK(kind([&] { train(ds, bad); }) == ErrorKind::InvalidConfig);
    CHECK(kind([&] { train(Dataset(2), GbdtConfig{}); }) == ErrorKind::EmptyDataset);
    CHECK(kind([&] { train(testing::make_blobs(1, {10, 0, 0}, 2, 1.0), GbdtConfig{}); }) == ErrorKind::SingleClassDataset);

    const auto m = train(ds, quick_config(2));
    CHECK(kind([&] { predict(m, std::vector<double>{1.0}); }) == ErrorKind::LengthMismatch);
    CHECK(kind([&] { predict(m, std::vector<double>{1.0, NAN}); }) == ErrorKind::NonFiniteInput);
}
