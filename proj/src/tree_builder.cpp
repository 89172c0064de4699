#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

#include "ctgboost/error.hpp"
#include "ctgboost/gbdt_config.hpp"
#include "ctgboost/tree.hpp"

namespace ctgboost {

std::size_t Tree::leaf_for_bins(std::span<const BinIndex> bins) const {
    int node = n_internal() > 0 ? 0 : ~0;
    while (node >= 0) {
        const auto n = static_cast<std::size_t>(node);
        node = bins[split_feature[n]] <= split_bin[n] ? left_child[n] : right_child[n];
    }
    return static_cast<std::size_t>(~node);
}

std::size_t Tree::leaf_for_values(std::span<const double> row) const {
    int node = n_internal() > 0 ? 0 : ~0;
    while (node >= 0) {
        const auto n = static_cast<std::size_t>(node);
        node = row[split_feature[n]] <= threshold[n] ? left_child[n] : right_child[n];
    }
    return static_cast<std::size_t>(~node);
}

void Tree::validate(std::size_t n_features) const {
    auto fail = [](const std::string& why) { throw Error(ErrorKind::CorruptModel, "tree: " + why); };
    const std::size_t internal = n_internal();
    const std::size_t leaves = n_leaves();
    if (leaves == 0) fail("no leaves");
    if (internal + 1 != leaves) fail("internal node count must be leaves - 1");
    if (split_bin.size() != internal || threshold.size() != internal || left_child.size() != internal ||
        right_child.size() != internal || split_gain.size() != internal) {
        fail("internal node arrays differ in length");
    }
    if (leaf_count.size() != leaves || leaf_hessian.size() != leaves) fail("leaf arrays differ in length");
    for (double v : leaf_value) {
        if (!std::isfinite(v)) fail("non-finite leaf value");
    }

    std::vector<int> node_seen(internal, 0), leaf_seen(leaves, 0);
    std::vector<int> stack{internal > 0 ? 0 : ~0};
    while (!stack.empty()) {
        const int link = stack.back();
        stack.pop_back();
        if (link < 0) {
            const auto leaf = static_cast<std::size_t>(~link);
            if (leaf >= leaves || leaf_seen[leaf]++) fail("bad or repeated leaf link");
            continue;
        }
        const auto n = static_cast<std::size_t>(link);
        if (n >= internal || node_seen[n]++) fail("bad or repeated node link");
        if (split_feature[n] >= n_features || split_bin[n] < 0 || split_bin[n] >= kMaxBins) fail("bad split");
        if (!std::isfinite(threshold[n])) fail("non-finite threshold");
        stack.push_back(left_child[n]);
        stack.push_back(right_child[n]);
    }
    if (std::count(node_seen.begin(), node_seen.end(), 1) != static_cast<std::ptrdiff_t>(internal) ||
        std::count(leaf_seen.begin(), leaf_seen.end(), 1) != static_cast<std::ptrdiff_t>(leaves)) {
        fail("unreachable nodes");
    }
}

namespace {

struct GrowingLeaf {
    std::vector<std::uint32_t> samples;
    Histogram hist;
    GradSums total;
    std::optional<SplitCandidate> split;
    int depth = 0;
    int creation = 0;
    int parent_node = -1;
};

// Pool order: gain desc, then feature, bin, creation order ascending.
bool splits_before(const GrowingLeaf& a, const GrowingLeaf& b) {
    const auto& sa = *a.split;
    const auto& sb = *b.split;
    if (sa.gain != sb.gain) return sa.gain > sb.gain;
    return std::tie(sa.feature, sa.bin, a.creation) < std::tie(sb.feature, sb.bin, b.creation);
}

}  // namespace

GrownTree grow_tree_leafwise(const BinnedMatrix& X, const BinMapper& mapper, std::span<const double> g,
                             std::span<const double> h, const GbdtConfig& cfg, SplitObserver* observer) {
    const std::size_t n = X.n_rows();
    if (g.size() != n || h.size() != n) throw Error(ErrorKind::LengthMismatch, "gradient arrays differ from row count");
    if (n < static_cast<std::size_t>(std::max(cfg.min_samples_leaf, 1))) {
        throw Error(ErrorKind::TooFewSamples, "tree needs at least " + std::to_string(cfg.min_samples_leaf) + " samples");
    }

    const GradientQuantizer q(n);
    const auto gq = q.encode_all(g);
    const auto hq = q.encode_all(h);

    auto can_deepen = [&](int depth) { return cfg.max_depth <= 0 || depth < cfg.max_depth; };
    auto find_split = [&](GrowingLeaf& leaf) {
        leaf.split.reset();
        if (can_deepen(leaf.depth) && leaf.total.count >= 2u * static_cast<std::uint32_t>(cfg.min_samples_leaf)) {
            leaf.split = best_split(leaf.hist, leaf.total, cfg, q);
        }
    };

    std::vector<GrowingLeaf> leaves(1);
    int created = 0;
    {
        GrowingLeaf& root = leaves[0];
        root.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) root.samples[i] = static_cast<std::uint32_t>(i);
        root.hist = Histogram(mapper);
        build_histogram(X, root.samples, gq, hq, root.hist);
        for (std::uint32_t s : root.samples) root.total += GradSums{gq[s], hq[s], 1};
        root.creation = created++;
        find_split(root);
    }

    Tree tree;
    const auto max_leaves = static_cast<std::size_t>(std::max(cfg.num_leaves, 1));
    while (leaves.size() < max_leaves) {
        std::size_t chosen = leaves.size();
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (!leaves[i].split) continue;
            if (chosen == leaves.size() || splits_before(leaves[i], leaves[chosen])) chosen = i;
        }
        if (chosen == leaves.size()) break;

        const SplitCandidate split = *leaves[chosen].split;
        const auto node = static_cast<int>(tree.n_internal());
        const auto right_index = static_cast<int>(leaves.size());

        GrowingLeaf parent = std::move(leaves[chosen]);
        if (parent.parent_node >= 0) {
            const auto p = static_cast<std::size_t>(parent.parent_node);
            int& link = tree.left_child[p] == ~static_cast<int>(chosen) ? tree.left_child[p] : tree.right_child[p];
            link = node;
        }
        tree.split_feature.push_back(static_cast<std::uint32_t>(split.feature));
        tree.split_bin.push_back(split.bin);
        tree.threshold.push_back(mapper.thresholds(split.feature)[static_cast<std::size_t>(split.bin)]);
        tree.left_child.push_back(~static_cast<int>(chosen));
        tree.right_child.push_back(~right_index);
        tree.split_gain.push_back(split.gain);

        GrowingLeaf left, right;
        const auto column = X.column(split.feature);
        for (std::uint32_t s : parent.samples) {
            (column[s] <= split.bin ? left.samples : right.samples).push_back(s);
        }
        left.total = split.left;
        right.total = split.right;
        if (left.samples.size() != left.total.count || right.samples.size() != right.total.count) {
            throw std::logic_error("partition disagrees with histogram counts");
        }

        GrowingLeaf& small = left.samples.size() <= right.samples.size() ? left : right;
        GrowingLeaf& large = &small == &left ? right : left;
        small.hist = Histogram(mapper);
        build_histogram(X, small.samples, gq, hq, small.hist);
        large.hist.assign_difference(parent.hist, small.hist);
#ifndef NDEBUG
        {
            Histogram direct(mapper);
            build_histogram(X, large.samples, gq, hq, direct);
            if (!(direct == large.hist)) throw std::logic_error("sibling subtraction mismatch");
        }
#endif
        if (observer) {
            observer->on_split(SplitEvent{parent.hist, left.hist, right.hist, left.samples, right.samples, gq, hq, X});
        }

        for (GrowingLeaf* child : {&left, &right}) {
            child->depth = parent.depth + 1;
            child->creation = created++;
            child->parent_node = node;
            find_split(*child);
        }
        leaves[chosen] = std::move(left);
        leaves.push_back(std::move(right));
    }

    GrownTree out;
    out.leaf_of_sample.assign(n, 0);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const auto& leaf = leaves[i];
        tree.leaf_value.push_back(leaf_output(q.decode(leaf.total.g), q.decode(leaf.total.h), cfg.reg_alpha, cfg.reg_lambda));
        tree.leaf_count.push_back(leaf.total.count);
        tree.leaf_hessian.push_back(q.decode(leaf.total.h));
        for (std::uint32_t s : leaf.samples) out.leaf_of_sample[s] = static_cast<std::uint32_t>(i);
    }
    out.tree = std::move(tree);
    return out;
}

}  // namespace ctgboost
