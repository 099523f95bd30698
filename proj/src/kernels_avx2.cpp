// Compiled with -mavx2 on x86-64 and only entered after a runtime CPU check.

#include <cmath>

#include "kernels_internal.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace pccdr::kernels::detail {
namespace {

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i];
    return s;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void distances_soa_avx2(const double* point, std::size_t dim, const double* refs,
                        std::size_t stride, std::size_t count, double* out) {
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        __m256d s = _mm256_setzero_pd();
        for (std::size_t c = 0; c < dim; ++c) {
            const __m256d d =
                _mm256_sub_pd(_mm256_set1_pd(point[c]), _mm256_loadu_pd(refs + c * stride + j));
            s = _mm256_add_pd(s, _mm256_mul_pd(d, d));
        }
        _mm256_storeu_pd(out + j, _mm256_sqrt_pd(s));
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

CenteredMoments centered_moments_avx2(const double* x, const double* y, std::size_t n, double mx,
                                      double my) {
    const __m256d vmx = _mm256_set1_pd(mx);
    const __m256d vmy = _mm256_set1_pd(my);
    __m256d sxx = _mm256_setzero_pd();
    __m256d syy = _mm256_setzero_pd();
    __m256d sxy = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
        const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
        sxx = _mm256_add_pd(sxx, _mm256_mul_pd(a, a));
        syy = _mm256_add_pd(syy, _mm256_mul_pd(b, b));
        sxy = _mm256_add_pd(sxy, _mm256_mul_pd(a, b));
    }
    CenteredMoments m{hsum(sxx), hsum(syy), hsum(sxy)};
    for (; i < n; ++i) {
        const double a = x[i] - mx;
        const double b = y[i] - my;
        m.sxx += a * a;
        m.syy += b * b;
        m.sxy += a * b;
    }
    return m;
}

void adam_update_avx2(double* param, const double* grad, double* m, double* v, std::size_t n,
                      const AdamCoeffs& c) {
    const __m256d b1 = _mm256_set1_pd(c.beta1);
    const __m256d b2 = _mm256_set1_pd(c.beta2);
    const __m256d one_b1 = _mm256_set1_pd(1.0 - c.beta1);
    const __m256d one_b2 = _mm256_set1_pd(1.0 - c.beta2);
    const __m256d bias1 = _mm256_set1_pd(c.bias1);
    const __m256d bias2 = _mm256_set1_pd(c.bias2);
    const __m256d lr = _mm256_set1_pd(c.learning_rate);
    const __m256d eps = _mm256_set1_pd(c.epsilon);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(grad + i);
        const __m256d mi = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                         _mm256_mul_pd(one_b1, g));
        const __m256d vi = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                         _mm256_mul_pd(one_b2, _mm256_mul_pd(g, g)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d mhat = _mm256_div_pd(mi, bias1);
        const __m256d vhat = _mm256_div_pd(vi, bias2);
        const __m256d step =
            _mm256_div_pd(_mm256_mul_pd(lr, mhat), _mm256_add_pd(_mm256_sqrt_pd(vhat), eps));
        _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
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

const KernelTable* avx2_table() {
    static const KernelTable table{
        Isa::kAvx2,           sum_avx2,        squared_distance_avx2, distances_soa_avx2,
        centered_moments_avx2, adam_update_avx2,
    };
    return &table;
}

}  // namespace pccdr::kernels::detail

#else

namespace pccdr::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace pccdr::kernels::detail

#endif
