#include <atomic>
#include <cstdlib>
#include <string>

#include "ctgboost/error.hpp"
#include "ctgboost/simd.hpp"

namespace ctgboost::simd {

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(CTGBOOST_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(CTGBOOST_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw Error(ErrorKind::InvalidConfig, "instruction set not available: " + std::string(to_string(isa)));
    }
    switch (isa) {
#if defined(CTGBOOST_HAVE_AVX2)
        case Isa::Avx2: return detail::kAvx2Table;
#endif
#if defined(CTGBOOST_HAVE_NEON)
        case Isa::Neon: return detail::kNeonTable;
#endif
        default: return detail::kScalarTable;
    }
}

namespace {

const KernelTable* detect() {
    if (const char* raw = std::getenv("CTG_BOOST_ISA")) {
        const std::string want(raw);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (want == to_string(isa) && isa_available(isa)) return &kernels_for(isa);
        }
    }
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (isa_available(isa)) return &kernels_for(isa);
    }
    return &detail::kScalarTable;
}

std::atomic<const KernelTable*> g_forced{nullptr};

}  // namespace

const KernelTable& kernels() {
    if (const KernelTable* forced = g_forced.load(std::memory_order_acquire)) return *forced;
    static const KernelTable* const detected = detect();
    return *detected;
}

void force_isa(Isa isa) { g_forced.store(&kernels_for(isa), std::memory_order_release); }

void reset_isa() { g_forced.store(nullptr, std::memory_order_release); }

}  // namespace ctgboost::simd
