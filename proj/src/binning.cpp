#include "ctgboost/binning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ctgboost/error.hpp"

namespace ctgboost {

BinMapper::BinMapper(std::vector<std::vector<double>> thresholds) : thresholds_(std::move(thresholds)) {
    for (std::size_t f = 0; f < thresholds_.size(); ++f) {
        const auto& t = thresholds_[f];
        if (t.size() >= static_cast<std::size_t>(kMaxBins)) {
            throw Error(ErrorKind::InvalidConfig, "feature " + std::to_string(f) + " has too many bin thresholds");
        }
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!std::isfinite(t[i]) || (i > 0 && !(t[i - 1] < t[i]))) {
                throw Error(ErrorKind::InvalidConfig,
                            "bin thresholds of feature " + std::to_string(f) + " are not strictly increasing");
            }
        }
    }
}

namespace {

// Boundary strictly separating lo < hi, preferring the midpoint.
double separating_threshold(double lo, double hi) {
    const double mid = std::midpoint(lo, hi);
    return mid < hi ? mid : lo;
}

std::vector<double> fit_column(std::vector<double> column, int max_bins) {
    std::sort(column.begin(), column.end());
    std::vector<double> distinct;
    std::unique_copy(column.begin(), column.end(), std::back_inserter(distinct));

    std::vector<double> thresholds;
    if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
        for (std::size_t i = 1; i < distinct.size(); ++i) {
            thresholds.push_back(separating_threshold(distinct[i - 1], distinct[i]));
        }
        return thresholds;
    }

    const std::size_t n = column.size();
    const auto bins = static_cast<std::size_t>(max_bins);
    for (std::size_t i = 1; i < bins; ++i) {
        const std::size_t cut = i * n / bins;
        if (cut == 0 || cut >= n) continue;
        const double lo = column[cut - 1];
        const double hi = column[cut];
        if (lo == hi) continue;
        const double t = separating_threshold(lo, hi);
        if (thresholds.empty() || thresholds.back() < t) thresholds.push_back(t);
    }
    return thresholds;
}

}  // namespace

BinMapper BinMapper::fit(std::span<const double> row_major, std::size_t n_features, int max_bins) {
    if (max_bins < 2 || max_bins > kMaxBins) {
        throw Error(ErrorKind::InvalidConfig, "max_bins must lie in [2, 255]");
    }
    if (n_features == 0 || row_major.empty()) throw Error(ErrorKind::EmptyInput, "cannot fit bins on an empty table");
    if (row_major.size() % n_features != 0) throw Error(ErrorKind::LengthMismatch, "ragged feature table");

    const std::size_t n_rows = row_major.size() / n_features;
    std::vector<std::vector<double>> thresholds(n_features);
    std::vector<double> column(n_rows);
    for (std::size_t f = 0; f < n_features; ++f) {
        for (std::size_t i = 0; i < n_rows; ++i) column[i] = row_major[i * n_features + f];
        thresholds[f] = fit_column(column, max_bins);
    }
    return BinMapper(std::move(thresholds));
}

BinIndex BinMapper::bin(std::size_t feature, double value) const {
    const auto& t = thresholds_[feature];
    return static_cast<BinIndex>(std::lower_bound(t.begin(), t.end(), value) - t.begin());
}

BinnedMatrix::BinnedMatrix(const BinMapper& mapper, std::span<const double> row_major, std::size_t n_rows)
    : n_rows_(n_rows), n_features_(mapper.n_features()), codes_(n_rows * mapper.n_features()) {
    if (row_major.size() != n_rows * n_features_) throw Error(ErrorKind::LengthMismatch, "table width differs from bin mapper");
    for (std::size_t f = 0; f < n_features_; ++f) {
        BinIndex* out = codes_.data() + f * n_rows_;
        for (std::size_t i = 0; i < n_rows_; ++i) out[i] = mapper.bin(f, row_major[i * n_features_ + f]);
    }
}

}  // namespace ctgboost
