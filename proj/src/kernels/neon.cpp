#include "kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>
#include <cmath>

namespace adder::kern {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
        a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
    }
    double acc = vaddvq_f64(a0) + vaddvq_f64(a1);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_neon(const double* x, std::size_t n) {
    float64x2_t a = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) a = vaddq_f64(a, vld1q_f64(x + i));
    double acc = vaddvq_f64(a);
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double asum_neon(const double* x, std::size_t n) {
    float64x2_t a = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) a = vaddq_f64(a, vabsq_f64(vld1q_f64(x + i)));
    double acc = vaddvq_f64(a);
    for (; i < n; ++i) acc += std::fabs(x[i]);
    return acc;
}

double l1_diff_neon(const double* x, const double* y, std::size_t n) {
    float64x2_t a = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        a = vaddq_f64(a, vabdq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    double acc = vaddvq_f64(a);
    for (; i < n; ++i) acc += std::fabs(x[i] - y[i]);
    return acc;
}

double max_abs_neon(const double* x, std::size_t n) {
    float64x2_t m = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(x + i)));
    double r = vmaxvq_f64(m);
    for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
    return r;
}

void axpy_neon(double* y, double a, const double* x, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double* x, double a, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(av, vld1q_f64(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void lerp_mul_neon(double* out, const double* lo, const double* hi,
                   const double* frac, const double* decay, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t l = vld1q_f64(lo + i);
        float64x2_t h = vld1q_f64(hi + i);
        float64x2_t f = vld1q_f64(frac + i);
        float64x2_t v = vfmaq_f64(l, f, vsubq_f64(h, l));
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(decay + i), v));
    }
    for (; i < n; ++i)
        out[i] = decay[i] * (lo[i] + frac[i] * (hi[i] - lo[i]));
}

void lagrange4_mul_neon(double* out, const double* ym1, const double* y0,
                        const double* y1, const double* y2, const double* frac,
                        const double* decay, std::size_t n) {
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t sixth = vdupq_n_f64(1.0 / 6.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t t = vld1q_f64(frac + i);
        const float64x2_t tm1 = vsubq_f64(t, one);
        const float64x2_t tp1 = vaddq_f64(t, one);
        const float64x2_t tm2 = vsubq_f64(t, two);
        const float64x2_t t_tm1 = vmulq_f64(t, tm1);
        const float64x2_t cm1 = vnegq_f64(vmulq_f64(sixth, vmulq_f64(t_tm1, tm2)));
        const float64x2_t c0 = vmulq_f64(half, vmulq_f64(vmulq_f64(tp1, tm1), tm2));
        const float64x2_t c1 = vnegq_f64(vmulq_f64(half, vmulq_f64(vmulq_f64(t, tp1), tm2)));
        const float64x2_t c2 = vmulq_f64(sixth, vmulq_f64(t_tm1, tp1));
        float64x2_t acc = vmulq_f64(cm1, vld1q_f64(ym1 + i));
        acc = vfmaq_f64(acc, c0, vld1q_f64(y0 + i));
        acc = vfmaq_f64(acc, c1, vld1q_f64(y1 + i));
        acc = vfmaq_f64(acc, c2, vld1q_f64(y2 + i));
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(decay + i), acc));
    }
    const double sx = 1.0 / 6.0;
    for (; i < n; ++i) {
        const double t = frac[i];
        const double tm1 = t - 1.0, tp1 = t + 1.0, tm2 = t - 2.0;
        const double cm1 = -sx * t * tm1 * tm2;
        const double c0 = 0.5 * tp1 * tm1 * tm2;
        const double c1 = -0.5 * t * tp1 * tm2;
        const double c2 = sx * t * tp1 * tm1;
        out[i] = decay[i] * (cm1 * ym1[i] + c0 * y0[i] + c1 * y1[i] + c2 * y2[i]);
    }
}

const Backend backend = {
    "neon",
    dot_neon,
    sum_neon,
    asum_neon,
    l1_diff_neon,
    max_abs_neon,
    axpy_neon,
    scale_neon,
    lerp_mul_neon,
    lagrange4_mul_neon,
};

} // namespace

const Backend* neon_backend() { return &backend; }

} // namespace adder::kern

#else

namespace adder::kern {
const Backend* neon_backend() { return nullptr; }
} // namespace adder::kern

#endif
