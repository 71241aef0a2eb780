#include <doctest.h>

#include "kernels/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace adder;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

long double dot_ld(const std::vector<double>& x, const std::vector<double>& y) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += static_cast<long double>(x[i]) * y[i];
    return acc;
}

} // namespace

TEST_CASE("scalar reductions match a long-double oracle") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 5u, 64u, 1000u}) {
        auto x = random_vec(rng, n);
        auto y = random_vec(rng, n);
        const auto* b = kern::scalar_backend();
        const double scale = 1.0 + static_cast<double>(n);
        CHECK(std::fabs(b->dot(x.data(), y.data(), n) -
                        static_cast<double>(dot_ld(x, y))) < 1e-13 * scale);
        long double s = 0.0L, as = 0.0L;
        for (double v : x) {
            s += v;
            as += std::fabs(v);
        }
        CHECK(std::fabs(b->sum(x.data(), n) - static_cast<double>(s)) < 1e-13 * scale);
        CHECK(std::fabs(b->asum(x.data(), n) - static_cast<double>(as)) < 1e-13 * scale);
    }
}

TEST_CASE("vector backends agree with the scalar reference") {
    std::vector<const kern::Backend*> variants;
    if (kern::avx2_backend()) variants.push_back(kern::avx2_backend());
    if (kern::neon_backend()) variants.push_back(kern::neon_backend());
    if (variants.empty()) return; // nothing vectorized on this machine

    const auto* ref = kern::scalar_backend();
    std::mt19937_64 rng(13);
    for (const auto* v : variants) {
        CAPTURE(v->name);
        for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 255u, 4096u, 4103u}) {
            auto x = random_vec(rng, n, -5.0, 5.0);
            auto y = random_vec(rng, n, -5.0, 5.0);
            const double tol = 1e-12 * (1.0 + static_cast<double>(n));

            CHECK(std::fabs(v->dot(x.data(), y.data(), n) - ref->dot(x.data(), y.data(), n)) <
                  tol);
            CHECK(std::fabs(v->sum(x.data(), n) - ref->sum(x.data(), n)) < tol);
            CHECK(std::fabs(v->asum(x.data(), n) - ref->asum(x.data(), n)) < tol);
            CHECK(std::fabs(v->l1_diff(x.data(), y.data(), n) -
                            ref->l1_diff(x.data(), y.data(), n)) < tol);
            CHECK(v->max_abs(x.data(), n) == ref->max_abs(x.data(), n));

            auto y1 = y, y2 = y;
            v->axpy(y1.data(), 1.7, x.data(), n);
            ref->axpy(y2.data(), 1.7, x.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) < 1e-13);

            auto x1 = x, x2 = x;
            v->scale(x1.data(), -0.37, n);
            ref->scale(x2.data(), -0.37, n);
            for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == x2[i]);

            if (n > 0) {
                auto lo = random_vec(rng, n);
                auto hi = random_vec(rng, n);
                auto fr = random_vec(rng, n, 0.0, 1.0);
                auto de = random_vec(rng, n, 0.0, 2.0);
                std::vector<double> o1(n), o2(n);
                v->lerp_mul(o1.data(), lo.data(), hi.data(), fr.data(), de.data(), n);
                ref->lerp_mul(o2.data(), lo.data(), hi.data(), fr.data(), de.data(), n);
                for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(o1[i] - o2[i]) < 1e-14);

                auto y2 = random_vec(rng, n);
                auto y3 = random_vec(rng, n);
                v->lagrange4_mul(o1.data(), lo.data(), hi.data(), y2.data(), y3.data(),
                                 fr.data(), de.data(), n);
                ref->lagrange4_mul(o2.data(), lo.data(), hi.data(), y2.data(), y3.data(),
                                   fr.data(), de.data(), n);
                for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(o1[i] - o2[i]) < 1e-13);
            }
        }
    }
}

TEST_CASE("lagrange4 kernel reproduces cubics exactly") {
    // values of p(x) = x^3 - 2x + 1 at nodes -1,0,1,2 and at 0 + t
    auto p = [](double x) { return x * x * x - 2.0 * x + 1.0; };
    const double ym1 = p(-1.0), y0 = p(0.0), y1 = p(1.0), y2 = p(2.0);
    for (double t : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        double out, de = 1.0;
        kern::scalar_backend()->lagrange4_mul(&out, &ym1, &y0, &y1, &y2, &t, &de, 1);
        CHECK(out == doctest::Approx(p(t)).epsilon(1e-14));
    }
}

TEST_CASE("backend selection honors requests and falls back") {
    const char* initial = kern::active().name;
    CHECK(kern::select("scalar"));
    CHECK(std::string(kern::active().name) == "scalar");
    CHECK_FALSE(kern::select("no-such-backend"));
    CHECK(std::string(kern::active().name) == "scalar");
    CHECK(kern::select(nullptr)); // back to automatic
    CHECK(std::string(kern::active().name) == std::string(initial));
}
