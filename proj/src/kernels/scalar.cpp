#include "kernels.hpp"

#include <cmath>

// Reference kernels. Plain loops, no reordering tricks; the vector
// backends are tested for equivalence against these.

namespace adder::kern {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double asum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
    return acc;
}

double l1_diff_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
    return acc;
}

double max_abs_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void lerp_mul_scalar(double* out, const double* lo, const double* hi,
                     const double* frac, const double* decay, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = decay[i] * (lo[i] + frac[i] * (hi[i] - lo[i]));
}

void lagrange4_mul_scalar(double* out, const double* ym1, const double* y0,
                          const double* y1, const double* y2, const double* frac,
                          const double* decay, std::size_t n) {
    const double sixth = 1.0 / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = frac[i];
        const double tm1 = t - 1.0, tp1 = t + 1.0, tm2 = t - 2.0;
        const double cm1 = -sixth * t * tm1 * tm2;
        const double c0 = 0.5 * tp1 * tm1 * tm2;
        const double c1 = -0.5 * t * tp1 * tm2;
        const double c2 = sixth * t * tp1 * tm1;
        out[i] = decay[i] * (cm1 * ym1[i] + c0 * y0[i] + c1 * y1[i] + c2 * y2[i]);
    }
}

const Backend backend = {
    "scalar",
    dot_scalar,
    sum_scalar,
    asum_scalar,
    l1_diff_scalar,
    max_abs_scalar,
    axpy_scalar,
    scale_scalar,
    lerp_mul_scalar,
    lagrange4_mul_scalar,
};

} // namespace

const Backend* scalar_backend() { return &backend; }

} // namespace adder::kern
