#include <cstdlib>
#include <string>

#include "lsp/error.hpp"
#include "lsp/simd.hpp"

namespace lsp::simd {

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool is_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(LSP_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(LSP_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
        if (is_available(isa)) out.push_back(isa);
    return out;
}

const KernelTable& kernels_for(Isa isa) {
    if (!is_available(isa))
        throw InvalidArgument("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
    switch (isa) {
#if defined(LSP_HAVE_AVX2)
        case Isa::avx2: return detail::avx2_table();
#endif
#if defined(LSP_HAVE_NEON)
        case Isa::neon: return detail::neon_table();
#endif
        default: return detail::scalar_table();
    }
}

namespace {

const KernelTable& select() {
    if (const char* env = std::getenv("LSP_SIMD")) {
        const std::string_view want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
            if (want == isa_name(isa) && is_available(isa)) return kernels_for(isa);
    }
    const auto isas = available_isas();
    return kernels_for(isas.back());
}

}  // namespace

const KernelTable& kernels() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace lsp::simd
