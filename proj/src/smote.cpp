#include "ctgboost/smote.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "ctgboost/error.hpp"
#include "ctgboost/rng.hpp"
#include "ctgboost/simd.hpp"

namespace ctgboost {

void SmoteConfig::validate() const {
    if (k_neighbors < 1) throw Error(ErrorKind::InvalidConfig, "k_neighbors must be at least 1");
}

namespace {

// k nearest same-class rows for every member, as positions into `members`.
std::vector<std::vector<std::size_t>> neighbour_lists(const Dataset& ds, const std::vector<std::size_t>& members,
                                                      std::size_t k) {
    const std::size_t m = members.size();
    std::vector<std::vector<std::size_t>> lists(m);
    std::vector<std::pair<double, std::size_t>> dist(m);
    for (std::size_t a = 0; a < m; ++a) {
        const auto xa = ds.row(members[a]);
        std::size_t used = 0;
        for (std::size_t b = 0; b < m; ++b) {
            if (b == a) continue;
            dist[used++] = {simd::squared_distance(xa, ds.row(members[b])), b};
        }
        // members are in ascending row position, so pair ordering breaks ties by position.
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.begin() + static_cast<std::ptrdiff_t>(used));
        lists[a].reserve(k);
        for (std::size_t j = 0; j < k; ++j) lists[a].push_back(dist[j].second);
    }
    return lists;
}

}  // namespace

Dataset smote(const Dataset& ds, const SmoteConfig& cfg) {
    cfg.validate();
    if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "smote requires at least one row");

    const ClassCounts counts = class_counts(ds);
    const std::size_t target = *std::max_element(counts.begin(), counts.end());
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < target && counts[c] < 2) {
            throw Error(ErrorKind::TooFewSamples, "class " + std::string(kClassNames[c]) + " has " +
                                                      std::to_string(counts[c]) + " rows; SMOTE needs at least 2");
        }
    }

    Dataset out = ds;
    std::uint64_t next_id = ds.max_row_id() + 1;
    Rng rng(cfg.seed);
    std::vector<double> synthetic(ds.n_features());

    for (std::size_t c = 0; c < counts.size(); ++c) {
        const std::size_t deficit = target - counts[c];
        if (deficit == 0) continue;

        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (static_cast<std::size_t>(ds.label(i)) == c) members.push_back(i);
        }
        const std::size_t k = std::min(cfg.k_neighbors, members.size() - 1);
        const auto neighbours = neighbour_lists(ds, members, k);

        for (std::size_t s = 0; s < deficit; ++s) {
            const std::size_t a = static_cast<std::size_t>(rng.index(members.size()));
            const std::size_t b = neighbours[a][static_cast<std::size_t>(rng.index(k))];
            const double u = rng.unit();
            const auto xa = ds.row(members[a]);
            const auto xb = ds.row(members[b]);
            for (std::size_t f = 0; f < synthetic.size(); ++f) {
                const double v = xa[f] + u * (xb[f] - xa[f]);
                // Rounding can step one ulp outside the segment; keep the convex hull exact.
                synthetic[f] = std::clamp(v, std::min(xa[f], xb[f]), std::max(xa[f], xb[f]));
            }
            out.push_back(synthetic, static_cast<int>(c), next_id++);
        }
    }
    return out;
}

}  // namespace ctgboost
