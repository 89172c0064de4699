#include <arm_neon.h>

#include <algorithm>

#include "ctgboost/simd.hpp"

namespace ctgboost::simd::detail {
namespace {

double squared_distance(const double* a, const double* b, std::size_t n) {
    // lo holds lanes {0,1}, hi holds lanes {2,3} of the 4-lane stripe.
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    const std::size_t blocked = n - n % 4;
    for (std::size_t i = 0; i < blocked; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        lo = vaddq_f64(lo, vmulq_f64(d0, d0));
        hi = vaddq_f64(hi, vmulq_f64(d1, d1));
    }
    const float64x2_t pair = vaddq_f64(lo, hi);
    double total = vgetq_lane_f64(pair, 0) + vgetq_lane_f64(pair, 1);
    for (std::size_t i = blocked; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

void scale_add(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void softmax_grad_hess(const double* p, const double* t, double* g, double* h, std::size_t n) {
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t floor = vdupq_n_f64(kMinHessian);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vp = vld1q_f64(p + i);
        vst1q_f64(g + i, vsubq_f64(vp, vld1q_f64(t + i)));
        vst1q_f64(h + i, vmaxq_f64(vmulq_f64(vp, vsubq_f64(one, vp)), floor));
    }
    for (; i < n; ++i) {
        g[i] = p[i] - t[i];
        h[i] = std::max(p[i] * (1.0 - p[i]), kMinHessian);
    }
}

void standardize(double* x, const double* mean, const double* inv_scale, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t centered = vsubq_f64(vld1q_f64(x + i), vld1q_f64(mean + i));
        vst1q_f64(x + i, vmulq_f64(centered, vld1q_f64(inv_scale + i)));
    }
    for (; i < n; ++i) x[i] = (x[i] - mean[i]) * inv_scale[i];
}

}  // namespace

const KernelTable kNeonTable{Isa::Neon, squared_distance, scale_add, softmax_grad_hess, standardize};

}  // namespace ctgboost::simd::detail
