#include <arm_neon.h>

#include "lsp/simd.hpp"

namespace lsp::simd::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_sq_distance_neon(const double* a, const double* b, const double* w, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(w + i), d), d);
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += w[i] * d * d;
    }
    return total;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_neon(double alpha, double* x, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

OverlapCounts overlap_neon(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t both = 0, either = 0, sum_a = 0, sum_b = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t va = vld1q_u8(a + i);
        const uint8x16_t vb = vld1q_u8(b + i);
        both += vaddlvq_u8(vandq_u8(va, vb));
        either += vaddlvq_u8(vorrq_u8(va, vb));
        sum_a += vaddlvq_u8(va);
        sum_b += vaddlvq_u8(vb);
    }
    for (; i < n; ++i) {
        both += a[i] & b[i];
        either += a[i] | b[i];
        sum_a += a[i];
        sum_b += b[i];
    }
    return OverlapCounts{both, either, sum_a - both, sum_b - both};
}

constexpr KernelTable kNeon{Isa::neon, dot_neon,   weighted_sq_distance_neon,
                            axpy_neon, scale_neon, overlap_neon};

}  // namespace

const KernelTable& neon_table() noexcept { return kNeon; }

}  // namespace lsp::simd::detail
