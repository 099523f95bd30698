#include <cmath>

#include "pccdr/kernels.hpp"

namespace pccdr::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void distances_soa_scalar(const double* point, std::size_t dim, const double* refs,
                          std::size_t stride, std::size_t count, double* out) {
    for (std::size_t j = 0; j < count; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double d = point[c] - refs[c * stride + j];
            s += d * d;
        }
        out[j] = std::sqrt(s);
    }
}

CenteredMoments centered_moments_scalar(const double* x, const double* y, std::size_t n,
                                        double mx, double my) {
    CenteredMoments m;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = x[i] - mx;
        const double b = y[i] - my;
        m.sxx += a * a;
        m.syy += b * b;
        m.sxy += a * b;
    }
    return m;
}

void adam_update_scalar(double* param, const double* grad, double* m, double* v, std::size_t n,
                        const AdamCoeffs& c) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * grad[i];
        v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (grad[i] * grad[i]);
        const double mhat = m[i] / c.bias1;
        const double vhat = v[i] / c.bias2;
        param[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        Isa::kScalar,       sum_scalar,          squared_distance_scalar, distances_soa_scalar,
        centered_moments_scalar, adam_update_scalar,
    };
    return table;
}

}  // namespace pccdr::kernels
