#pragma once

#include <cstdint>

namespace ctgboost {

struct GbdtConfig {
    double learning_rate = 0.1;
    int num_leaves = 31;
    int max_depth = -1;  // <= 0 means unlimited
    int min_samples_leaf = 20;
    double min_child_weight = 1e-3;  // absolute hessian floor per child
    double min_split_gain = 0.0;
    int n_estimators = 100;
    int max_bins = 255;
    std::uint64_t seed = 123;
    double reg_alpha = 0.0;
    double reg_lambda = 0.0;

    /// Throws InvalidConfig on any out-of-domain field.
    void validate() const;

    friend bool operator==(const GbdtConfig&, const GbdtConfig&) = default;
};

}  // namespace ctgboost
