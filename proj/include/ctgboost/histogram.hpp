#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctgboost/binning.hpp"

namespace ctgboost {

struct GbdtConfig;

/// Fixed-point encoding of per-sample gradients and hessians.
///
/// Histogram sums are exact integer additions, so parent = left + right
/// holds bit-for-bit and sibling subtraction reproduces a direct build.
/// The scale leaves headroom for |g| <= 1 summed over every sample.
class GradientQuantizer {
public:
    explicit GradientQuantizer(std::size_t n_samples);

    int fraction_bits() const noexcept { return bits_; }
    std::int64_t encode(double v) const;
    double decode(std::int64_t v) const noexcept { return static_cast<double>(v) * inv_scale_; }

    std::vector<std::int64_t> encode_all(std::span<const double> values) const;

private:
    int bits_;
    double scale_;
    double inv_scale_;
};

struct GradSums {
    std::int64_t g = 0;
    std::int64_t h = 0;
    std::uint32_t count = 0;

    GradSums& operator+=(const GradSums& o) noexcept {
        g += o.g;
        h += o.h;
        count += o.count;
        return *this;
    }
    GradSums& operator-=(const GradSums& o) noexcept {
        g -= o.g;
        h -= o.h;
        count -= o.count;
        return *this;
    }
    friend GradSums operator-(GradSums a, const GradSums& b) noexcept { return a -= b; }
    friend bool operator==(const GradSums&, const GradSums&) = default;
};

/// Per-feature histograms of one node, laid out back to back.
class Histogram {
public:
    Histogram() = default;
    explicit Histogram(const BinMapper& mapper);

    std::size_t n_features() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::span<GradSums> feature(std::size_t f) { return {bins_.data() + offsets_[f], offsets_[f + 1] - offsets_[f]}; }
    std::span<const GradSums> feature(std::size_t f) const {
        return {bins_.data() + offsets_[f], offsets_[f + 1] - offsets_[f]};
    }
    std::span<const GradSums> all_bins() const noexcept { return bins_; }

    /// this := parent - sibling, bin by bin.
    void assign_difference(const Histogram& parent, const Histogram& sibling);

    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<GradSums> bins_;
};

/// Accumulates one feature column over a sample subset into `out`
/// (which must be zeroed and sized to the feature's bin count).
void build_histogram(std::span<const BinIndex> column, std::span<const std::uint32_t> samples,
                     std::span<const std::int64_t> g, std::span<const std::int64_t> h, std::span<GradSums> out);

/// All features of a node; features run in parallel when the node is large.
void build_histogram(const BinnedMatrix& X, std::span<const std::uint32_t> samples, std::span<const std::int64_t> g,
                     std::span<const std::int64_t> h, Histogram& out);

struct SplitCandidate {
    std::size_t feature = 0;
    int bin = 0;  // left child takes bins [0, bin]
    double gain = 0.0;
    GradSums left;
    GradSums right;
};

/// Second-order leaf score T(G)^2 / (H + lambda), T the L1 soft threshold.
double leaf_score(double G, double H, double reg_alpha, double reg_lambda) noexcept;

/// Optimal leaf value -T(G) / (H + lambda + 1e-16).
double leaf_output(double G, double H, double reg_alpha, double reg_lambda) noexcept;

/// Max-gain feasible split of a node; ties go to the lower feature, then
/// the lower bin. Feasibility: both sides hold >= min_samples_leaf samples
/// and >= min_child_weight hessian, and gain > min_split_gain strictly.
std::optional<SplitCandidate> best_split(const Histogram& hist, const GradSums& parent, const GbdtConfig& cfg,
                                         const GradientQuantizer& q);

/// Single-feature scan used by best_split.
std::optional<SplitCandidate> best_split_for_feature(std::span<const GradSums> bins, std::size_t feature,
                                                     const GradSums& parent, const GbdtConfig& cfg,
                                                     const GradientQuantizer& q);

}  // namespace ctgboost
