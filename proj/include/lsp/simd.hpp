#pragma once

// Data-parallel kernels behind the detectors and metrics. Each kernel has a
// scalar reference version plus AVX2 (x86-64) and NEON (aarch64) variants;
// the active table is chosen once at runtime from CPU features and can be
// pinned with LSP_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lsp::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

/// Set intersection / union sizes of two 0/1 indicator rows.
struct OverlapCounts {
    std::size_t both = 0;    // a & b
    std::size_t either = 0;  // a | b
    std::size_t only_a = 0;  // a & ~b
    std::size_t only_b = 0;  // ~a & b

    friend bool operator==(const OverlapCounts&, const OverlapCounts&) = default;
};

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum_i w[i] * (a[i] - b[i])^2
    double (*weighted_sq_distance)(const double* a, const double* b, const double* w, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// x *= alpha
    void (*scale)(double alpha, double* x, std::size_t n);
    OverlapCounts (*overlap)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

/// Variants compiled into this binary and supported by the running CPU.
std::vector<Isa> available_isas();
bool is_available(Isa isa) noexcept;

/// Kernel table for a specific ISA; throws lsp::InvalidArgument when unavailable.
const KernelTable& kernels_for(Isa isa);

/// Process-wide active table (best available, or the LSP_SIMD override).
const KernelTable& kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return kernels().dot(a.data(), b.data(), a.size());
}

inline double weighted_sq_distance(std::span<const double> a, std::span<const double> b,
                                   std::span<const double> w) {
    return kernels().weighted_sq_distance(a.data(), b.data(), w.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline void scale(double alpha, std::span<double> x) { kernels().scale(alpha, x.data(), x.size()); }

inline OverlapCounts overlap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    return kernels().overlap(a.data(), b.data(), a.size());
}

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(LSP_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(LSP_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif
}  // namespace detail

}  // namespace lsp::simd
