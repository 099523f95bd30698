#pragma once

// Data-parallel inner loops shared by the losses, the metrics and the optimizer.
//
// Every kernel has a scalar reference implementation; SIMD variants (AVX2 on
// x86-64, NEON on AArch64) are picked at runtime. Elementwise kernels
// (distances, Adam) produce bit-identical results across variants because the
// per-lane operation order matches the scalar code. Reductions (sum, centered
// moments) differ only in summation order.

#include <cstddef>
#include <string_view>

namespace pccdr::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct CenteredMoments {
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
};

struct AdamCoeffs {
    double learning_rate;
    double beta1;
    double beta2;
    double epsilon;
    double bias1;  // 1 - beta1^t
    double bias2;  // 1 - beta2^t
};

struct KernelTable {
    Isa isa;

    double (*sum)(const double* x, std::size_t n);

    double (*squared_distance)(const double* a, const double* b, std::size_t n);

    // out[j] = || point - refs[:, j] || for j < count, where refs is stored
    // coordinate-major: refs[c * stride + j].
    void (*distances_soa)(const double* point, std::size_t dim, const double* refs,
                          std::size_t stride, std::size_t count, double* out);

    // Sums of (x-mx)^2, (y-my)^2 and (x-mx)(y-my).
    CenteredMoments (*centered_moments)(const double* x, const double* y, std::size_t n,
                                        double mx, double my);

    void (*adam_update)(double* param, const double* grad, double* m, double* v,
                        std::size_t n, const AdamCoeffs& c);
};

const KernelTable& scalar_table();
bool available(Isa isa);
const KernelTable& table(Isa isa);

/// Best available table, unless overridden by force() or PCCDR_SIMD=scalar|avx2|neon.
const KernelTable& active();
void force(Isa isa);
void reset_forced();

}  // namespace pccdr::kernels
