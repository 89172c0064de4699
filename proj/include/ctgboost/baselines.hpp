#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctgboost/booster.hpp"
#include "ctgboost/dataset.hpp"
#include "ctgboost/gbdt_config.hpp"

namespace ctgboost {

enum class ModelKind { Gbdt, Dummy, Cart, Knn };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts gbdt|lightgbm, dummy, cart|dt, knn. Throws UnknownParam.
ModelKind parse_model_kind(std::string_view name);

struct CartParams {
    int min_samples_leaf = 1;
};

struct KnnParams {
    int k = 5;
    bool standardize = true;
};

struct ModelSpec {
    ModelKind kind = ModelKind::Gbdt;
    GbdtConfig gbdt;
    CartParams cart;
    KnnParams knn;
    std::uint64_t seed = 123;

    static ModelSpec of(ModelKind kind) {
        ModelSpec spec;
        spec.kind = kind;
        return spec;
    }
    std::string name() const { return std::string(to_string(kind)); }
    void validate() const;
};

struct DummyModel {
    ClassCounts counts{};
    int mode = 0;
};

/// Exact-threshold gini tree. Leaves keep their class counts.
struct CartModel {
    std::vector<int> feature;  // -1 marks a leaf
    std::vector<double> threshold;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<ClassCounts> counts;

    std::size_t n_nodes() const noexcept { return feature.size(); }
    std::size_t n_leaves() const;
    std::size_t depth() const;
    /// Node index of the leaf reached by `row`.
    std::size_t leaf_for(std::span<const double> row) const;
};

struct KnnModel {
    KnnParams params;
    std::size_t n_features = 0;
    std::vector<double> mean;
    std::vector<double> inv_scale;  // 0 for constant features
    std::vector<double> points;     // standardized, row-major
    std::vector<int> labels;
    std::vector<std::uint64_t> row_ids;
};

DummyModel dummy_fit(const Dataset& train);
std::vector<int> dummy_fit_predict(const Dataset& train, std::size_t n_test_rows);

CartModel cart_train(const Dataset& train, const CartParams& params = {});
std::vector<double> cart_predict_proba(const CartModel& model, std::span<const double> row);

KnnModel knn_fit(const Dataset& train, const KnnParams& params = {});
/// Vote fractions of the k nearest training rows (distance ties to the lower row_id).
std::vector<double> knn_predict_proba(const KnnModel& model, std::span<const double> row);
int knn_predict(const Dataset& train, const KnnParams& params, std::span<const double> row);

using FittedModel = std::variant<BoostedModel, DummyModel, CartModel, KnnModel>;

FittedModel fit_model(const ModelSpec& spec, const Dataset& train);
std::vector<double> predict_proba(const FittedModel& model, std::span<const double> row);
/// argmax of predict_proba, lowest class index on ties.
int predict(const FittedModel& model, std::span<const double> row);

}  // namespace ctgboost
