#include <immintrin.h>

#include <algorithm>

#include "ctgboost/simd.hpp"

namespace ctgboost::simd::detail {
namespace {

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t blocked = n - n % 4;
    for (std::size_t i = 0; i < blocked; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    // [l0 l1 l2 l3] -> [l0+l2, l1+l3] -> (l0+l2) + (l1+l3)
    const __m128d pair = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double total = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (std::size_t i = blocked; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

void scale_add(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void softmax_grad_hess(const double* p, const double* t, double* g, double* h, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d floor = _mm256_set1_pd(kMinHessian);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vp = _mm256_loadu_pd(p + i);
        _mm256_storeu_pd(g + i, _mm256_sub_pd(vp, _mm256_loadu_pd(t + i)));
        const __m256d var = _mm256_mul_pd(vp, _mm256_sub_pd(one, vp));
        _mm256_storeu_pd(h + i, _mm256_max_pd(var, floor));
    }
    for (; i < n; ++i) {
        g[i] = p[i] - t[i];
        h[i] = std::max(p[i] * (1.0 - p[i]), kMinHessian);
    }
}

void standardize(double* x, const double* mean, const double* inv_scale, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d centered = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i));
        _mm256_storeu_pd(x + i, _mm256_mul_pd(centered, _mm256_loadu_pd(inv_scale + i)));
    }
    for (; i < n; ++i) x[i] = (x[i] - mean[i]) * inv_scale[i];
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, squared_distance, scale_add, softmax_grad_hess, standardize};

}  // namespace ctgboost::simd::detail
