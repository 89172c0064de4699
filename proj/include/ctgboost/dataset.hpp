#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctgboost {

inline constexpr int kNumClasses = 3;
inline constexpr std::size_t kNumPredictors = 21;

/// Display names for encoded labels 0/1/2 (raw 1/2/3).
inline constexpr std::array<std::string_view, kNumClasses> kClassNames{"Normal", "Suspect", "Pathological"};

using ClassCounts = std::array<std::size_t, kNumClasses>;

struct FeatureSchema {
    std::vector<std::string> predictors;
    std::string target;

    /// The 21 predictors and target of the public cardiotocography table.
    static FeatureSchema canonical();

    /// Throws InvalidConfig unless the names are distinct and the target is
    /// not also a predictor.
    void validate() const;
};

/// Lowercases, trims, and joins whitespace runs with '_'. Known spelling
/// variants are mapped onto the canonical name.
std::string normalize_column_name(std::string_view raw);

/// Row-major feature table with encoded labels in [0, kNumClasses).
///
/// Immutable in practice: all transformations return a new Dataset.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::size_t n_features) : n_features_(n_features) {}

    /// Validates finiteness, label range, and row_id uniqueness.
    Dataset(std::vector<double> features, std::size_t n_features, std::vector<int> labels,
            std::vector<std::uint64_t> row_ids);

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t n_features() const noexcept { return n_features_; }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * n_features_, n_features_};
    }
    int label(std::size_t i) const { return labels_[i]; }
    std::uint64_t row_id(std::size_t i) const { return row_ids_[i]; }

    std::span<const double> features() const noexcept { return features_; }
    std::span<const int> labels() const noexcept { return labels_; }
    std::span<const std::uint64_t> row_ids() const noexcept { return row_ids_; }

    /// Appends without the uniqueness check; callers own row_id freshness.
    void push_back(std::span<const double> row, int label, std::uint64_t row_id);

    /// Rows at the given positions, in the given order.
    Dataset subset(std::span<const std::size_t> positions) const;

    std::uint64_t max_row_id() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t n_features_ = 0;
    std::vector<double> features_;
    std::vector<int> labels_;
    std::vector<std::uint64_t> row_ids_;
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
};

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema = FeatureSchema::canonical());

/// Parses CSV text already in memory; `source` only labels diagnostics.
Dataset parse_csv(std::string_view text, const FeatureSchema& schema = FeatureSchema::canonical(),
                  std::string_view source = "<memory>");

/// Writes labels back in raw form (1.0/2.0/3.0) with round-trip precision.
void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const FeatureSchema& schema = FeatureSchema::canonical());

ClassCounts class_counts(const Dataset& ds);

/// Per-class test quotas for a stratified split: total = ceil(fraction * n),
/// distributed by largest remainder of fraction * class_count (ties to the
/// lower class index). Each quota is within 1 of round(fraction * count).
ClassCounts stratified_test_quota(const ClassCounts& counts, double test_fraction);

/// Seeded per-class shuffle; the first quota rows of each class go to test.
/// Both halves keep the parent's row order.
SplitPair stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

}  // namespace ctgboost
