#pragma once

// Definition-direct reference computations used by unit and acceptance tests.
// None of these share code with the library beyond its public data types.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctgboost/binning.hpp"
#include "ctgboost/dataset.hpp"
#include "ctgboost/gbdt_config.hpp"
#include "ctgboost/histogram.hpp"

namespace ctgboost::testing {

struct OracleSplit {
    std::size_t feature = 0;
    int bin = 0;
    double gain = 0.0;
};

/// Tries every (feature, bin) cut by partitioning samples directly.
std::optional<OracleSplit> brute_force_split(const BinnedMatrix& X, const BinMapper& mapper,
                                             std::span<const std::uint32_t> samples,
                                             std::span<const std::int64_t> g, std::span<const std::int64_t> h,
                                             const GbdtConfig& cfg, const GradientQuantizer& q);

/// Central differences of the softmax cross-entropy, in long double.
std::vector<double> fd_gradient(std::span<const double> raw, int label, double step);
std::vector<double> fd_hessian_diag(std::span<const double> raw, int label, double step);

/// SMOTE re-derived from its sampling rules: full sort of neighbours, then
/// (row, neighbour, u) draws per synthetic row, classes ascending.
Dataset smote_oracle(const Dataset& ds, std::size_t k_neighbors, std::uint64_t seed);

struct MetricOracle {
    double accuracy = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double kappa = 0.0;
    double mcc = 0.0;
};

/// Metrics straight from label vectors: per-sample counting for the summary,
/// observed vs chance agreement for kappa, and the one-hot covariance form of MCC.
MetricOracle metric_oracle(std::span<const int> y_true, std::span<const int> y_pred, std::size_t n_classes);

/// Probability that a random positive outranks a random negative (ties count half).
double auc_pairwise(std::span<const double> positive_scores, std::span<const double> negative_scores);

}  // namespace ctgboost::testing
