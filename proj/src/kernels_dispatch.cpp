#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "pccdr/errors.hpp"

namespace pccdr::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* best_table() {
    if (const char* env = std::getenv("PCCDR_SIMD")) {
        const std::string name(env);
        if (name == "scalar") return &scalar_table();
        if (name == "avx2" && available(Isa::kAvx2)) return detail::avx2_table();
        if (name == "neon" && available(Isa::kNeon)) return detail::neon_table();
    }
    if (available(Isa::kAvx2)) return detail::avx2_table();
    if (available(Isa::kNeon)) return detail::neon_table();
    return &scalar_table();
}

std::atomic<const KernelTable*> g_forced{nullptr};

}  // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return "scalar";
        case Isa::kAvx2: return "avx2";
        case Isa::kNeon: return "neon";
    }
    return "unknown";
}

bool available(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return true;
        case Isa::kAvx2: return detail::avx2_table() != nullptr && cpu_has_avx2();
        case Isa::kNeon: return detail::neon_table() != nullptr;
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!available(isa)) {
        throw InvalidInput("kernel variant not available: " + std::string(to_string(isa)));
    }
    switch (isa) {
        case Isa::kAvx2: return *detail::avx2_table();
        case Isa::kNeon: return *detail::neon_table();
        case Isa::kScalar: break;
    }
    return scalar_table();
}

const KernelTable& active() {
    if (const KernelTable* forced = g_forced.load(std::memory_order_acquire)) return *forced;
    static const KernelTable* best = best_table();
    return *best;
}

void force(Isa isa) { g_forced.store(&table(isa), std::memory_order_release); }

void reset_forced() { g_forced.store(nullptr, std::memory_order_release); }

}  // namespace pccdr::kernels
