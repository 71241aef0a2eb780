#include "kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>
#include <cmath>

namespace adder::kern {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd();
    __m256d a3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
        a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
        a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    double acc = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double asum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, abs_pd(_mm256_loadu_pd(x + i)));
        a1 = _mm256_add_pd(a1, abs_pd(_mm256_loadu_pd(x + i + 4)));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, abs_pd(_mm256_loadu_pd(x + i)));
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc += std::fabs(x[i]);
    return acc;
}

double l1_diff_avx2(const double* x, const double* y, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i),
                                                    _mm256_loadu_pd(y + i))));
        a1 = _mm256_add_pd(a1, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i + 4),
                                                    _mm256_loadu_pd(y + i + 4))));
    }
    for (; i + 4 <= n; i += 4)
        a0 = _mm256_add_pd(a0, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i),
                                                    _mm256_loadu_pd(y + i))));
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc += std::fabs(x[i] - y[i]);
    return acc;
}

double max_abs_avx2(const double* x, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, abs_pd(_mm256_loadu_pd(x + i)));
    double r = 0.0;
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, m);
    for (double v : tmp) r = std::max(r, v);
    for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
    return r;
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double* x, double a, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void lerp_mul_avx2(double* out, const double* lo, const double* hi,
                   const double* frac, const double* decay, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d l = _mm256_loadu_pd(lo + i);
        __m256d h = _mm256_loadu_pd(hi + i);
        __m256d f = _mm256_loadu_pd(frac + i);
        __m256d v = _mm256_fmadd_pd(f, _mm256_sub_pd(h, l), l);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(decay + i), v));
    }
    for (; i < n; ++i)
        out[i] = decay[i] * (lo[i] + frac[i] * (hi[i] - lo[i]));
}

void lagrange4_mul_avx2(double* out, const double* ym1, const double* y0,
                        const double* y1, const double* y2, const double* frac,
                        const double* decay, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d sixth = _mm256_set1_pd(1.0 / 6.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(frac + i);
        const __m256d tm1 = _mm256_sub_pd(t, one);
        const __m256d tp1 = _mm256_add_pd(t, one);
        const __m256d tm2 = _mm256_sub_pd(t, two);
        const __m256d t_tm1 = _mm256_mul_pd(t, tm1);
        const __m256d cm1 =
            _mm256_mul_pd(sixth, _mm256_sub_pd(_mm256_setzero_pd(),
                                               _mm256_mul_pd(t_tm1, tm2)));
        const __m256d c0 =
            _mm256_mul_pd(half, _mm256_mul_pd(_mm256_mul_pd(tp1, tm1), tm2));
        const __m256d c1 = _mm256_mul_pd(
            half, _mm256_sub_pd(_mm256_setzero_pd(),
                                _mm256_mul_pd(_mm256_mul_pd(t, tp1), tm2)));
        const __m256d c2 = _mm256_mul_pd(sixth, _mm256_mul_pd(t_tm1, tp1));
        __m256d acc = _mm256_mul_pd(cm1, _mm256_loadu_pd(ym1 + i));
        acc = _mm256_fmadd_pd(c0, _mm256_loadu_pd(y0 + i), acc);
        acc = _mm256_fmadd_pd(c1, _mm256_loadu_pd(y1 + i), acc);
        acc = _mm256_fmadd_pd(c2, _mm256_loadu_pd(y2 + i), acc);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(decay + i), acc));
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
    "avx2",
    dot_avx2,
    sum_avx2,
    asum_avx2,
    l1_diff_avx2,
    max_abs_avx2,
    axpy_avx2,
    scale_avx2,
    lerp_mul_avx2,
    lagrange4_mul_avx2,
};

} // namespace

const Backend* avx2_backend() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &backend;
    return nullptr;
}

} // namespace adder::kern

#else

namespace adder::kern {
const Backend* avx2_backend() { return nullptr; }
} // namespace adder::kern

#endif
