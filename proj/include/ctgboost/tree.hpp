#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctgboost/binning.hpp"
#include "ctgboost/histogram.hpp"

namespace ctgboost {

struct GbdtConfig;

/// Regression tree in flat arrays. Child links >= 0 name internal nodes;
/// negative links encode leaf ~index. A tree with no internal nodes is a
/// single leaf 0.
struct Tree {
    // internal nodes
    std::vector<std::uint32_t> split_feature;
    std::vector<int> split_bin;
    std::vector<double> threshold;  // raw-value equivalent of split_bin
    std::vector<int> left_child;
    std::vector<int> right_child;
    std::vector<double> split_gain;
    // leaves
    std::vector<double> leaf_value;  // unscaled; learning rate applies at accumulation
    std::vector<std::uint32_t> leaf_count;
    std::vector<double> leaf_hessian;

    std::size_t n_leaves() const noexcept { return leaf_value.size(); }
    std::size_t n_internal() const noexcept { return split_feature.size(); }

    /// Leaf reached by a row of bin codes.
    std::size_t leaf_for_bins(std::span<const BinIndex> bins) const;
    /// Leaf reached by raw values, comparing against stored thresholds.
    std::size_t leaf_for_values(std::span<const double> row) const;

    /// Structural check: leaves = internal + 1, every node and leaf
    /// reachable exactly once from the root. Throws CorruptModel.
    void validate(std::size_t n_features) const;

    friend bool operator==(const Tree&, const Tree&) = default;
};

/// Per-split view handed to observers: the parent histogram, both child
/// histograms as stored by the builder, and the samples routed to each side.
struct SplitEvent {
    const Histogram& parent;
    const Histogram& left;
    const Histogram& right;
    std::span<const std::uint32_t> left_samples;
    std::span<const std::uint32_t> right_samples;
    std::span<const std::int64_t> g;
    std::span<const std::int64_t> h;
    const BinnedMatrix& binned;
};

class SplitObserver {
public:
    virtual ~SplitObserver() = default;
    virtual void on_split(const SplitEvent& event) = 0;
};

struct GrownTree {
    Tree tree;
    std::vector<std::uint32_t> leaf_of_sample;  // indexed like the gradient arrays
};

/// Best-first growth: repeatedly splits the pooled leaf with the highest
/// gain (ties by feature, bin, then leaf creation order) until num_leaves
/// is reached or no leaf can split. The smaller child's histogram is built
/// directly; the larger one is parent minus smaller.
///
/// g and h are per-sample for one class. Throws TooFewSamples when fewer
/// than min_samples_leaf samples are supplied.
GrownTree grow_tree_leafwise(const BinnedMatrix& X, const BinMapper& mapper, std::span<const double> g,
                             std::span<const double> h, const GbdtConfig& cfg, SplitObserver* observer = nullptr);

}  // namespace ctgboost
