#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops with a scalar reference and vector variants
// selected at runtime. Every variant produces bit-identical results to the
// scalar reference: reductions use a fixed 4-lane striped accumulation order
// and the build disables FMA contraction.
namespace ctgboost::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
    Isa isa;
    /// Σ (a[i] - b[i])², lane-striped over 4 accumulators.
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    /// y[i] += alpha * x[i]
    void (*scale_add)(double alpha, const double* x, double* y, std::size_t n);
    /// g[i] = p[i] - t[i]; h[i] = max(p[i] * (1 - p[i]), 1e-16)
    void (*softmax_grad_hess)(const double* p, const double* t, double* g, double* h, std::size_t n);
    /// x[i] = (x[i] - mean[i]) * inv_scale[i]
    void (*standardize)(double* x, const double* mean, const double* inv_scale, std::size_t n);
};

bool isa_available(Isa isa) noexcept;

/// Kernel table for a specific instruction set; throws if unavailable.
const KernelTable& kernels_for(Isa isa);

/// Best available table, unless CTG_BOOST_ISA=scalar|avx2|neon or
/// force_isa() pins another one.
const KernelTable& kernels();

/// Pins the active table (tests, benchmarks). Throws if unavailable.
void force_isa(Isa isa);
void reset_isa();

inline constexpr double kMinHessian = 1e-16;

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return kernels().squared_distance(a.data(), b.data(), a.size());
}

inline void scale_add(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    kernels().scale_add(alpha, x.data(), y.data(), x.size());
}

inline void softmax_grad_hess(std::span<const double> p, std::span<const double> target,
                              std::span<double> g, std::span<double> h) {
    assert(p.size() == target.size() && p.size() == g.size() && p.size() == h.size());
    kernels().softmax_grad_hess(p.data(), target.data(), g.data(), h.data(), p.size());
}

inline void standardize(std::span<double> x, std::span<const double> mean,
                        std::span<const double> inv_scale) {
    assert(x.size() == mean.size() && x.size() == inv_scale.size());
    kernels().standardize(x.data(), mean.data(), inv_scale.data(), x.size());
}

namespace detail {
extern const KernelTable kScalarTable;
#if defined(CTGBOOST_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(CTGBOOST_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace ctgboost::simd
