#include "ctgboost/histogram.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "ctgboost/error.hpp"
#include "ctgboost/gbdt_config.hpp"
#include "ctgboost/parallel.hpp"

namespace ctgboost {

GradientQuantizer::GradientQuantizer(std::size_t n_samples) {
    // |g| <= 1 per sample: n * 2^bits must stay below 2^62.
    const int used = static_cast<int>(std::bit_width(n_samples + 1));
    bits_ = std::clamp(62 - used, 16, 48);
    scale_ = std::ldexp(1.0, bits_);
    inv_scale_ = std::ldexp(1.0, -bits_);
}

std::int64_t GradientQuantizer::encode(double v) const { return std::llround(v * scale_); }

std::vector<std::int64_t> GradientQuantizer::encode_all(std::span<const double> values) const {
    std::vector<std::int64_t> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [this](double v) { return encode(v); });
    return out;
}

Histogram::Histogram(const BinMapper& mapper) {
    offsets_.reserve(mapper.n_features() + 1);
    offsets_.push_back(0);
    for (std::size_t f = 0; f < mapper.n_features(); ++f) {
        offsets_.push_back(offsets_.back() + static_cast<std::size_t>(mapper.n_bins(f)));
    }
    bins_.assign(offsets_.back(), GradSums{});
}

void Histogram::assign_difference(const Histogram& parent, const Histogram& sibling) {
    offsets_ = parent.offsets_;
    bins_.resize(parent.bins_.size());
    for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i] = parent.bins_[i] - sibling.bins_[i];
}

void build_histogram(std::span<const BinIndex> column, std::span<const std::uint32_t> samples,
                     std::span<const std::int64_t> g, std::span<const std::int64_t> h, std::span<GradSums> out) {
    for (std::uint32_t s : samples) {
        GradSums& b = out[column[s]];
        b.g += g[s];
        b.h += h[s];
        ++b.count;
    }
}

void build_histogram(const BinnedMatrix& X, std::span<const std::uint32_t> samples, std::span<const std::int64_t> g,
                     std::span<const std::int64_t> h, Histogram& out) {
    const auto n_features = static_cast<std::ptrdiff_t>(X.n_features());
    const bool wide = samples.size() * X.n_features() >= 16384;
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (wide)
    for (std::ptrdiff_t f = 0; f < n_features; ++f) {
        auto bins = out.feature(static_cast<std::size_t>(f));
        std::fill(bins.begin(), bins.end(), GradSums{});
        build_histogram(X.column(static_cast<std::size_t>(f)), samples, g, h, bins);
    }
}

double leaf_score(double G, double H, double reg_alpha, double reg_lambda) noexcept {
    const double t = std::copysign(std::max(std::abs(G) - reg_alpha, 0.0), G);
    return t * t / (H + reg_lambda);
}

double leaf_output(double G, double H, double reg_alpha, double reg_lambda) noexcept {
    const double t = std::copysign(std::max(std::abs(G) - reg_alpha, 0.0), G);
    return -t / (H + reg_lambda + 1e-16);
}

std::optional<SplitCandidate> best_split_for_feature(std::span<const GradSums> bins, std::size_t feature,
                                                     const GradSums& parent, const GbdtConfig& cfg,
                                                     const GradientQuantizer& q) {
    const double parent_score = leaf_score(q.decode(parent.g), q.decode(parent.h), cfg.reg_alpha, cfg.reg_lambda);
    const auto min_count = static_cast<std::uint32_t>(cfg.min_samples_leaf);

    std::optional<SplitCandidate> best;
    GradSums left;
    for (std::size_t b = 0; b + 1 < bins.size(); ++b) {
        left += bins[b];
        if (left.count < min_count) continue;
        const GradSums right = parent - left;
        if (right.count < min_count) break;
        const double hl = q.decode(left.h);
        const double hr = q.decode(right.h);
        if (hl < cfg.min_child_weight || hr < cfg.min_child_weight) continue;
        const double gain = leaf_score(q.decode(left.g), hl, cfg.reg_alpha, cfg.reg_lambda) +
                            leaf_score(q.decode(right.g), hr, cfg.reg_alpha, cfg.reg_lambda) - parent_score;
        if (!(gain > cfg.min_split_gain)) continue;
        if (!best || gain > best->gain) best = SplitCandidate{feature, static_cast<int>(b), gain, left, right};
    }
    return best;
}

std::optional<SplitCandidate> best_split(const Histogram& hist, const GradSums& parent, const GbdtConfig& cfg,
                                         const GradientQuantizer& q) {
    const std::size_t n_features = hist.n_features();
    std::vector<std::optional<SplitCandidate>> per_feature(n_features);
    const bool wide = parent.count * n_features >= 16384;
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (wide)
    for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(n_features); ++f) {
        const auto fi = static_cast<std::size_t>(f);
        per_feature[fi] = best_split_for_feature(hist.feature(fi), fi, parent, cfg, q);
    }
    // Reduce in feature order so the winner does not depend on thread count.
    std::optional<SplitCandidate> best;
    for (auto& cand : per_feature) {
        if (cand && (!best || cand->gain > best->gain)) best = cand;
    }
    return best;
}

}  // namespace ctgboost
