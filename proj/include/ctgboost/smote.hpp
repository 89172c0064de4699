#pragma once

#include <cstddef>
#include <cstdint>

#include "ctgboost/dataset.hpp"

namespace ctgboost {

struct SmoteConfig {
    std::size_t k_neighbors = 5;
    std::uint64_t seed = 123;

    void validate() const;
};

/// Oversamples every class up to the majority count.
///
/// Originals come first, unchanged. Each synthetic row interpolates between
/// a randomly chosen row of the class and one of its k nearest same-class
/// neighbours (raw Euclidean distance, ties to the lower position), at a
/// uniform offset u in [0, 1). Classes are processed in ascending label
/// order and each synthetic row draws (row, neighbour, u) in that order from
/// a single seeded stream. Synthetic rows take fresh row_ids above the
/// input maximum. k is clipped to class_count - 1.
Dataset smote(const Dataset& ds, const SmoteConfig& cfg);

}  // namespace ctgboost
