#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ctgboost {

using BinIndex = std::uint8_t;
inline constexpr int kMaxBins = 255;

/// Per-feature upper-bound thresholds. A value v lands in the first bin b
/// with v <= thresholds[b]; values above every threshold land in the last
/// bin, so n_bins = thresholds + 1.
class BinMapper {
public:
    BinMapper() = default;
    /// Throws InvalidConfig unless every list is strictly increasing, finite,
    /// and shorter than kMaxBins.
    explicit BinMapper(std::vector<std::vector<double>> thresholds);

    /// Distinct values <= max_bins: one bin per value, thresholds at the
    /// midpoints. Otherwise thresholds split the sorted training column into
    /// max_bins equal-population runs, dropping boundaries that fall inside
    /// a run of equal values.
    static BinMapper fit(std::span<const double> row_major, std::size_t n_features, int max_bins);

    std::size_t n_features() const noexcept { return thresholds_.size(); }
    int n_bins(std::size_t feature) const { return static_cast<int>(thresholds_[feature].size()) + 1; }
    std::span<const double> thresholds(std::size_t feature) const { return thresholds_[feature]; }
    const std::vector<std::vector<double>>& all_thresholds() const noexcept { return thresholds_; }

    BinIndex bin(std::size_t feature, double value) const;

    friend bool operator==(const BinMapper&, const BinMapper&) = default;

private:
    std::vector<std::vector<double>> thresholds_;
};

/// Feature-major bin codes for a row-major table.
class BinnedMatrix {
public:
    BinnedMatrix(const BinMapper& mapper, std::span<const double> row_major, std::size_t n_rows);

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_features() const noexcept { return n_features_; }
    std::span<const BinIndex> column(std::size_t feature) const {
        return {codes_.data() + feature * n_rows_, n_rows_};
    }

private:
    std::size_t n_rows_;
    std::size_t n_features_;
    std::vector<BinIndex> codes_;
};

}  // namespace ctgboost
