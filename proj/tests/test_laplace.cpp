#include <doctest.h>

#include "adder/laplace.hpp"
#include "fixtures.hpp"

#include <cmath>
#include <stdexcept>

using namespace adder;

TEST_CASE("laplace transform basics") {
    Grid1D g(1.0, 2.0, 1001);
    GridFunction ind(g, 1.0);
    // at y = 0 the kernel is 1
    CHECK(laplace(ind, 0.0) == doctest::Approx(integrate(ind)).epsilon(1e-14));
    // int_1^2 e^{-s} ds = e^{-1} - e^{-2}
    CHECK(laplace(ind, 1.0) ==
          doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-6));
    CHECK_THROWS_AS(laplace(ind, -0.5), std::domain_error);
}

TEST_CASE("transform is monotone in the rate for nonnegative input") {
    const GridFunction& f = fixtures::ref_eigen().f;
    const auto y = default_y_grid();
    const LaplaceProfile p = laplace_profile(f, y);
    REQUIRE(p.values.size() == y.size());
    for (std::size_t i = 1; i < y.size(); ++i)
        CHECK(p.values[i] <= p.values[i - 1] + 1e-14);
    CHECK(p.values[0] == doctest::Approx(integrate(f)).epsilon(1e-13));
}

TEST_CASE("transform linearity on sampled profiles") {
    Grid1D g(0.5, 5.0, 301);
    GridFunction a(g), b(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        a[i] = std::sin(g.node(i)) + 1.5;
        b[i] = g.node(i);
    }
    GridFunction combo(g);
    for (std::size_t i = 0; i < g.size(); ++i) combo[i] = 2.0 * a[i] - 0.5 * b[i];
    for (double y : {0.0, 0.3, 2.0})
        CHECK(laplace(combo, y) ==
              doctest::Approx(2.0 * laplace(a, y) - 0.5 * laplace(b, y)).epsilon(1e-12));
}

TEST_CASE("fixed point passes the Laplace-domain identity, an indicator fails it") {
    const auto& op = fixtures::ref_op();
    const GridFunction& f = fixtures::ref_eigen().f;
    const auto y = default_y_grid();

    const LaplaceValidation ok = fixed_point_residual_laplace(f, op, y);
    CHECK(ok.max_residual < 1e-2);
    // y = 0 entry reduces to mass conservation
    CHECK(ok.residuals[0] < 1e-3);
    CHECK(ok.phi_tail >= 0.0);
    CHECK(ok.phi_tail < 1e-3);

    Grid1D g(1.0, 30.0, 1537);
    GridFunction ind(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        ind[i] = (g.node(i) >= 1.0 && g.node(i) <= 2.0) ? 1.0 : 0.0;
    const LaplaceValidation bad = fixed_point_residual_laplace(ind, op, y);
    CHECK(bad.max_residual > 0.05);
}

TEST_CASE("Laplace residual is controlled by the L1 fixed-point residual") {
    const auto& op = fixtures::ref_op();
    const auto& r = fixtures::ref_eigen();
    // ||Tf - f||_1 = ||T_Sigma f - f|| = (1 - rho) for the converged pair
    const GridFunction tf = op.apply(r.f);
    const double l1 = l1_distance(tf, r.f);
    const LaplaceValidation v = fixed_point_residual_laplace(r.f, op, default_y_grid());
    const double h = r.f.grid.spacing();
    CHECK(v.max_residual <= l1 + 50.0 * h * h + v.phi_tail + 1e-10);
}
