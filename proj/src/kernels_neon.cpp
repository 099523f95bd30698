// NEON is part of the AArch64 baseline, so no runtime check is needed there.

#include <cmath>

#include "kernels_internal.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace pccdr::kernels::detail {
namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void distances_soa_neon(const double* point, std::size_t dim, const double* refs,
                        std::size_t stride, std::size_t count, double* out) {
    std::size_t j = 0;
    for (; j + 2 <= count; j += 2) {
        float64x2_t s = vdupq_n_f64(0.0);
        for (std::size_t c = 0; c < dim; ++c) {
            const float64x2_t d = vsubq_f64(vdupq_n_f64(point[c]), vld1q_f64(refs + c * stride + j));
            s = vaddq_f64(s, vmulq_f64(d, d));
        }
        vst1q_f64(out + j, vsqrtq_f64(s));
    }
    for (; j < count; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double d = point[c] - refs[c * stride + j];
            s += d * d;
        }
        out[j] = std::sqrt(s);
    }
}

CenteredMoments centered_moments_neon(const double* x, const double* y, std::size_t n, double mx,
                                      double my) {
    const float64x2_t vmx = vdupq_n_f64(mx);
    const float64x2_t vmy = vdupq_n_f64(my);
    float64x2_t sxx = vdupq_n_f64(0.0);
    float64x2_t syy = vdupq_n_f64(0.0);
    float64x2_t sxy = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t a = vsubq_f64(vld1q_f64(x + i), vmx);
        const float64x2_t b = vsubq_f64(vld1q_f64(y + i), vmy);
        sxx = vaddq_f64(sxx, vmulq_f64(a, a));
        syy = vaddq_f64(syy, vmulq_f64(b, b));
        sxy = vaddq_f64(sxy, vmulq_f64(a, b));
    }
    CenteredMoments m{vaddvq_f64(sxx), vaddvq_f64(syy), vaddvq_f64(sxy)};
    for (; i < n; ++i) {
        const double a = x[i] - mx;
        const double b = y[i] - my;
        m.sxx += a * a;
        m.syy += b * b;
        m.sxy += a * b;
    }
    return m;
}

void adam_update_neon(double* param, const double* grad, double* m, double* v, std::size_t n,
                      const AdamCoeffs& c) {
    const float64x2_t b1 = vdupq_n_f64(c.beta1);
    const float64x2_t b2 = vdupq_n_f64(c.beta2);
    const float64x2_t one_b1 = vdupq_n_f64(1.0 - c.beta1);
    const float64x2_t one_b2 = vdupq_n_f64(1.0 - c.beta2);
    const float64x2_t bias1 = vdupq_n_f64(c.bias1);
    const float64x2_t bias2 = vdupq_n_f64(c.bias2);
    const float64x2_t lr = vdupq_n_f64(c.learning_rate);
    const float64x2_t eps = vdupq_n_f64(c.epsilon);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t g = vld1q_f64(grad + i);
        const float64x2_t mi = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(one_b1, g));
        const float64x2_t vi =
            vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(one_b2, vmulq_f64(g, g)));
        vst1q_f64(m + i, mi);
        vst1q_f64(v + i, vi);
        const float64x2_t mhat = vdivq_f64(mi, bias1);
        const float64x2_t vhat = vdivq_f64(vi, bias2);
        const float64x2_t step = vdivq_f64(vmulq_f64(lr, mhat), vaddq_f64(vsqrtq_f64(vhat), eps));
        vst1q_f64(param + i, vsubq_f64(vld1q_f64(param + i), step));
    }
    for (; i < n; ++i) {
        m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * grad[i];
        v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (grad[i] * grad[i]);
        const double mhat = m[i] / c.bias1;
        const double vhat = v[i] / c.bias2;
        param[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
}

}  // namespace

const KernelTable* neon_table() {
    static const KernelTable table{
        Isa::kNeon,           sum_neon,        squared_distance_neon, distances_soa_neon,
        centered_moments_neon, adam_update_neon,
    };
    return &table;
}

}  // namespace pccdr::kernels::detail

#else

namespace pccdr::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace pccdr::kernels::detail

#endif
