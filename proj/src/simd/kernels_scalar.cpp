#include "lsp/simd.hpp"

namespace lsp::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_sq_distance_scalar(const double* a, const double* b, const double* w, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += w[i] * d * d;
    }
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

OverlapCounts overlap_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    OverlapCounts c;
    std::size_t sum_a = 0, sum_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        c.both += a[i] & b[i];
        c.either += a[i] | b[i];
        sum_a += a[i];
        sum_b += b[i];
    }
    c.only_a = sum_a - c.both;
    c.only_b = sum_b - c.both;
    return c;
}

constexpr KernelTable kScalar{Isa::scalar,  dot_scalar,   weighted_sq_distance_scalar,
                              axpy_scalar,  scale_scalar, overlap_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace lsp::simd::detail
