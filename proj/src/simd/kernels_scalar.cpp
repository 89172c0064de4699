#include <algorithm>

#include "ctgboost/simd.hpp"

namespace ctgboost::simd::detail {
namespace {

double squared_distance(const double* a, const double* b, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t blocked = n - n % 4;
    for (std::size_t i = 0; i < blocked; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double d = a[i + j] - b[i + j];
            lane[j] += d * d;
        }
    }
    // Same reduction tree as the 256-bit horizontal add.
    double total = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (std::size_t i = blocked; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

void scale_add(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void softmax_grad_hess(const double* p, const double* t, double* g, double* h, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = p[i] - t[i];
        h[i] = std::max(p[i] * (1.0 - p[i]), kMinHessian);
    }
}

void standardize(double* x, const double* mean, const double* inv_scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = (x[i] - mean[i]) * inv_scale[i];
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar, squared_distance, scale_add, softmax_grad_hess, standardize};

}  // namespace ctgboost::simd::detail
