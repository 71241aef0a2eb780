#include <doctest.h>

#include "adder/entropy.hpp"
#include "adder/reconstruct.hpp"
#include "fixtures.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace adder;

namespace {

EntropyConfig make_cfg(HFunction h) {
    const auto& op = fixtures::ref_op();
    const GridFunction& f = fixtures::ref_eigen().f;
    const Grid1D a_grid = default_a_grid(op.survivor(), 385);
    return EntropyConfig{h, build_M(f, op.survivor(), a_grid)};
}

double weighted_mass_of(const Density2D& d) {
    return d.weighted_integral([](double a, double s) { return a + s; });
}

} // namespace

TEST_CASE("entropy of the stationary state is H(1) times the weighted mass") {
    const EntropyConfig cfg = make_cfg(HFunction::quadratic());
    const Density2D& N = cfg.stationary;
    CHECK(entropy(cfg, N) == doctest::Approx(0.0).epsilon(1e-12));

    const EntropyConfig cfg_abs = make_cfg(HFunction::absolute_deviation());
    CHECK(entropy(cfg_abs, N) == doctest::Approx(0.0).epsilon(1e-12));

    // n = 2N with H = (1-x)^2: H(2) = 1 -> integral of x N
    Density2D twice = N;
    twice.scale(2.0);
    CHECK(entropy(cfg, twice) ==
          doctest::Approx(weighted_mass_of(N)).epsilon(1e-12));
}

TEST_CASE("identity generator recovers the conserved weighted mass") {
    const EntropyConfig cfg = make_cfg(HFunction::identity());
    Density2D n = cfg.stationary;
    // any admissible profile supported on the stationary support
    for (std::size_t j = 0; j < n.second_grid().size(); ++j)
        for (std::size_t i = 0; i < n.a_grid().size(); ++i)
            n.value(i, j) *= 1.0 + 0.5 * std::sin(n.a_grid().node(i) + n.second_grid().node(j));
    CHECK(entropy(cfg, n) == doctest::Approx(weighted_mass_of(n)).epsilon(1e-10));
}

TEST_CASE("dissipation vanishes for the stationary state and for affine H") {
    const auto& op = fixtures::ref_op();
    const EntropyConfig cfg = make_cfg(HFunction::quadratic());
    CHECK(std::fabs(dissipation(cfg, op, cfg.stationary)) < 1e-10);

    const EntropyConfig cfg_id = make_cfg(HFunction::identity());
    Density2D n = cfg_id.stationary;
    for (std::size_t j = 0; j < n.second_grid().size(); ++j)
        for (std::size_t i = 0; i < n.a_grid().size(); ++i)
            n.value(i, j) *= 1.0 + 0.3 * std::cos(2.0 * n.second_grid().node(j));
    CHECK(std::fabs(dissipation(cfg_id, op, n)) < 1e-10);
}

TEST_CASE("dissipation is positive for a genuinely varying ratio and convex H") {
    const auto& op = fixtures::ref_op();
    const EntropyConfig cfg = make_cfg(HFunction::quadratic());
    Density2D n = cfg.stationary;
    for (std::size_t j = 0; j < n.second_grid().size(); ++j) {
        const double s = n.second_grid().node(j);
        for (std::size_t i = 0; i < n.a_grid().size(); ++i) {
            const double x = n.a_grid().node(i) + s;
            n.value(i, j) *= 1.0 + 0.5 * std::sin(x);
        }
    }
    const double d = dissipation(cfg, op, n);
    CHECK(d > 1e-6);
}

TEST_CASE("dissipation is nonnegative for every convex generator in the library") {
    const auto& op = fixtures::ref_op();
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (const HFunction& h :
         {HFunction::quadratic(), HFunction::absolute_deviation(),
          HFunction::tabulated({0.0, 0.5, 1.0, 1.5, 2.0, 3.0},
                               {2.0, 1.2, 1.0, 1.3, 2.1, 4.5})}) {
        const EntropyConfig cfg = make_cfg(h);
        Density2D n = cfg.stationary;
        for (auto& v : n.data()) v *= u(rng);
        CHECK(dissipation(cfg, op, n) >= -1e-9);
    }
}

TEST_CASE("nu_x is a probability measure at admissible probe sizes") {
    const auto& op = fixtures::ref_op();
    const EntropyConfig cfg = make_cfg(HFunction::quadratic());
    for (double x : {1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0}) {
        const double mass = nu_x_mass(cfg, op, x);
        CHECK(std::fabs(mass - 1.0) < 1e-2);
    }
    // below the support edge the defining density vanishes
    CHECK_THROWS_AS(nu_x_mass(cfg, op, 0.5), std::domain_error);
}

TEST_CASE("nu mass is invariant under renormalization of the stationary state") {
    const auto& op = fixtures::ref_op();
    EntropyConfig cfg = make_cfg(HFunction::quadratic());
    const double before = nu_x_mass(cfg, op, 2.0);
    cfg.stationary.scale(0.5); // both N(a,x/z) and N(0,x) rescale
    const double after = nu_x_mass(cfg, op, 2.0);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("tabulated generators must be convex") {
    CHECK_THROWS_AS(HFunction::tabulated({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0}),
                    std::invalid_argument);
    const HFunction ok = HFunction::tabulated({0.0, 1.0, 2.0}, {1.0, 0.0, 1.0});
    CHECK(ok(0.5) == doctest::Approx(0.5));
    CHECK(ok(3.0) == doctest::Approx(2.0)); // linear extension
}
