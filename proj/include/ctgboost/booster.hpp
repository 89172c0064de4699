#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ctgboost/binning.hpp"
#include "ctgboost/dataset.hpp"
#include "ctgboost/gbdt_config.hpp"
#include "ctgboost/tree.hpp"

namespace ctgboost {

struct GradHess {
    std::vector<double> g;
    std::vector<double> h;
};

/// Softmax cross-entropy derivatives with respect to raw scores:
/// g_k = p_k - [label == k], h_k = max(p_k (1 - p_k), 1e-16).
GradHess softmax_gradients(std::span<const double> raw_scores, int label);

/// Numerically stable softmax (max subtracted before exponentiation).
std::vector<double> softmax(std::span<const double> raw_scores);

/// -log softmax(raw)[label]
double cross_entropy(std::span<const double> raw_scores, int label);

struct BoostedModel {
    int n_classes = kNumClasses;
    std::vector<double> init_scores;
    std::vector<Tree> trees;  // iteration-major: trees[iter * n_classes + k]
    BinMapper bin_mapper;
    GbdtConfig config;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;

    std::size_t n_iterations() const noexcept {
        return n_classes > 0 ? trees.size() / static_cast<std::size_t>(n_classes) : 0;
    }
    const Tree& tree(std::size_t iteration, int k) const {
        return trees[iteration * static_cast<std::size_t>(n_classes) + static_cast<std::size_t>(k)];
    }

    friend bool operator==(const BoostedModel&, const BoostedModel&) = default;
};

struct IterationEvent {
    int iteration;        // 1-based; 0 reports the initial state
    double mean_loss;     // mean softmax cross-entropy over the training rows
};

class TrainObserver : public SplitObserver {
public:
    void on_split(const SplitEvent&) override {}
    virtual void on_iteration(const IterationEvent&) {}
};

/// Multiclass boosting from ln(class prior) initial scores. Each iteration
/// computes softmax gradients once, grows one tree per class, then adds
/// learning_rate * leaf value to every training score.
BoostedModel train(const Dataset& train, const GbdtConfig& cfg, TrainObserver* observer = nullptr,
                   const FeatureSchema& schema = FeatureSchema::canonical());

/// init_k plus learning_rate times each routed leaf value, accumulated in
/// iteration order. Throws NonFiniteInput.
std::vector<double> predict_raw(const BoostedModel& model, std::span<const double> row);
std::vector<double> predict_proba(const BoostedModel& model, std::span<const double> row);
/// argmax of the probabilities, lowest class index on ties.
int predict(const BoostedModel& model, std::span<const double> row);

int argmax(std::span<const double> values);

}  // namespace ctgboost
