#pragma once

#include <cstddef>

// Data-parallel inner loops used by the numerical modules. A scalar
// reference implementation is always present; vectorized variants
// (AVX2/FMA on x86-64, NEON on aarch64) are selected at runtime.
// The environment variable ADDER_SIMD ("scalar", "avx2", "neon")
// overrides the automatic choice.

namespace adder::kern {

struct Backend {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    // sum_i |x[i]|
    double (*asum)(const double* x, std::size_t n);
    // sum_i |x[i]-y[i]|
    double (*l1_diff)(const double* x, const double* y, std::size_t n);
    // max_i |x[i]|
    double (*max_abs)(const double* x, std::size_t n);
    // y[i] += a*x[i]
    void (*axpy)(double* y, double a, const double* x, std::size_t n);
    // x[i] *= a
    void (*scale)(double* x, double a, std::size_t n);
    // out[i] = decay[i] * (lo[i] + frac[i]*(hi[i]-lo[i]))
    void (*lerp_mul)(double* out, const double* lo, const double* hi,
                     const double* frac, const double* decay, std::size_t n);
    // 4-point Lagrange interpolation at fraction t[i] in the cell [y0, y1],
    // nodes at -1,0,1,2: out[i] = decay[i] * sum_k c_k(t[i]) * y_k[i]
    void (*lagrange4_mul)(double* out, const double* ym1, const double* y0,
                          const double* y1, const double* y2, const double* frac,
                          const double* decay, std::size_t n);
};

// Currently active backend (initialized on first use).
const Backend& active();

// Force a backend by name; returns false if it is not available on
// this machine. Passing nullptr re-runs the automatic selection.
bool select(const char* name);

// Backends compiled into this binary.
const Backend* scalar_backend();
const Backend* avx2_backend();  // nullptr when unavailable
const Backend* neon_backend();  // nullptr when unavailable

inline double dot(const double* x, const double* y, std::size_t n) {
    return active().dot(x, y, n);
}
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double asum(const double* x, std::size_t n) { return active().asum(x, n); }
inline double l1_diff(const double* x, const double* y, std::size_t n) {
    return active().l1_diff(x, y, n);
}
inline double max_abs(const double* x, std::size_t n) { return active().max_abs(x, n); }
inline void axpy(double* y, double a, const double* x, std::size_t n) {
    active().axpy(y, a, x, n);
}
inline void scale(double* x, double a, std::size_t n) { active().scale(x, a, n); }
inline void lerp_mul(double* out, const double* lo, const double* hi,
                     const double* frac, const double* decay, std::size_t n) {
    active().lerp_mul(out, lo, hi, frac, decay, n);
}
inline void lagrange4_mul(double* out, const double* ym1, const double* y0,
                          const double* y1, const double* y2, const double* frac,
                          const double* decay, std::size_t n) {
    active().lagrange4_mul(out, ym1, y0, y1, y2, frac, decay, n);
}

} // namespace adder::kern
