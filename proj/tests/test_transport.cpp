#include <doctest.h>

#include "adder/reconstruct.hpp"
#include "adder/transport.hpp"
#include "fixtures.hpp"

#include <cmath>
#include <stdexcept>

using namespace adder;

namespace {

struct Setup {
    Grid1D a_grid;
    Grid1D s_grid;
    Density2D stationary;
};

Setup make_setup(std::size_t na, std::size_t ns, double a_max, double s_max) {
    const auto& op = fixtures::ref_op();
    const Grid1D a_grid = grid_through_point(a_max, na, op.rate().b);
    const Grid1D s_grid(op.b_theta(), s_max, ns);
    const GridFunction f_res = resample(fixtures::ref_eigen().f, s_grid);
    return Setup{a_grid, s_grid, build_M(f_res, op.survivor(), a_grid)};
}

} // namespace

TEST_CASE("zero data stays zero and t advances") {
    const auto& op = fixtures::ref_op();
    const Setup su = make_setup(65, 65, 30.0, 10.0);
    PopulationState st{0.0, Density2D(Density2D::Coords::IncrementBirthsize, su.a_grid,
                                      su.s_grid, 0.0)};
    const TransportStepper stepper(op, su.a_grid, su.s_grid, 1e-3);
    for (int k = 0; k < 5; ++k) stepper.step(st);
    CHECK(st.t == doctest::Approx(5e-3));
    for (double v : st.m.data()) CHECK(v == 0.0);
    CHECK(st.clipped_mass == 0.0);
}

TEST_CASE("the CFL-like accuracy guard rejects oversized steps") {
    const auto& op = fixtures::ref_op();
    const Setup su = make_setup(65, 65, 60.0, 20.0);
    // spacing ~ 1, displacement (60+20)*dt: dt = 0.05 moves by ~4 spacings
    CHECK_THROWS_AS(TransportStepper(op, su.a_grid, su.s_grid, 0.05),
                    std::invalid_argument);
}

TEST_CASE("weighted mass grows like e^t from the stationary state") {
    const auto& op = fixtures::ref_op();
    const Setup su = make_setup(257, 129, 80.0, 20.0);
    PopulationState st{0.0, su.stationary};

    RunOptions opts;
    opts.dt = 1e-3;
    opts.t_end = 0.5;
    opts.output_every = 50;
    const TrajectorySummary traj = run(op, std::move(st), opts);

    REQUIRE(traj.rows.size() >= 2);
    const double w0 = traj.rows.front().weighted_mass;
    for (const auto& row : traj.rows) {
        const double drift = row.weighted_mass * std::exp(-row.t) / w0 - 1.0;
        CHECK(std::fabs(drift) < 1e-2);
    }
    CHECK(traj.clipped_mass == 0.0);
}

TEST_CASE("stationary data stays near the stationary profile") {
    const auto& op = fixtures::ref_op();
    const Setup su = make_setup(257, 129, 80.0, 20.0);
    EntropyConfig cfg{HFunction::quadratic(), su.stationary};

    PopulationState st{0.0, su.stationary};
    RunOptions opts;
    opts.dt = 1e-3;
    opts.t_end = 0.5;
    opts.output_every = 100;
    opts.entropy_cfg = &cfg;
    const TrajectorySummary traj = run(op, std::move(st), opts);

    for (const auto& row : traj.rows) {
        CHECK(row.dist_to_ref < 5e-2);
        CHECK(row.domination < 1.05);
    }
}

TEST_CASE("entropy is monotone and dissipation nonnegative along a perturbed run") {
    const auto& op = fixtures::ref_op();
    const Setup su = make_setup(193, 129, 60.0, 16.0);
    EntropyConfig cfg{HFunction::quadratic(), su.stationary};

    Density2D n0 = su.stationary;
    for (std::size_t j = 0; j < n0.second_grid().size(); ++j) {
        const double s = n0.second_grid().node(j);
        for (std::size_t i = 0; i < n0.a_grid().size(); ++i)
            n0.value(i, j) *= 1.0 + 0.4 * std::sin(n0.a_grid().node(i) + s);
    }

    PopulationState st{0.0, std::move(n0)};
    RunOptions opts;
    opts.dt = 2e-3;
    opts.t_end = 0.6;
    opts.output_every = 30;
    opts.entropy_cfg = &cfg;
    const TrajectorySummary traj = run(op, std::move(st), opts);

    REQUIRE(traj.rows.size() >= 4);
    for (std::size_t k = 1; k < traj.rows.size(); ++k)
        CHECK(traj.rows[k].entropy <= traj.rows[k - 1].entropy + 1e-4);
    for (const auto& row : traj.rows) CHECK(row.dissipation >= -1e-6);

    // discrete entropy-dissipation consistency: dH/dt ~ -D
    for (std::size_t k = 1; k < traj.rows.size(); ++k) {
        const auto& r0 = traj.rows[k - 1];
        const auto& r1 = traj.rows[k];
        const double dh_dt = (r1.entropy - r0.entropy) / (r1.t - r0.t);
        const double d_mid = 0.5 * (r0.dissipation + r1.dissipation);
        CHECK(std::fabs(dh_dt + d_mid) <
              0.25 * std::fabs(d_mid) + 5.0 * (su.a_grid.spacing() + opts.dt));
    }
}

TEST_CASE("equal-mitosis run oscillates with period log 2") {
    const auto& op = fixtures::ref_op();
    const Grid1D a_grid = grid_through_point(40.0, 385, 1.0);
    const Grid1D s_grid(1.0, 12.0, 193);

    Density2D n0(Density2D::Coords::IncrementBirthsize, a_grid, s_grid, 0.0);
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        const double s = s_grid.node(j);
        for (std::size_t i = 0; i < a_grid.size(); ++i) {
            const double a = a_grid.node(i);
            n0.value(i, j) = std::exp(-0.5 * std::pow((s - 2.5) / 0.15, 2)) *
                             std::exp(-0.5 * std::pow(a / 0.2, 2));
        }
    }

    PopulationState st{0.0, std::move(n0)};
    RunOptions opts;
    opts.dt = 1.5e-3;
    opts.t_end = 4.0;
    opts.output_every = 200;
    opts.signal_window = std::make_pair(2.5, 3.0);
    const TrajectorySummary traj = run(op, std::move(st), opts);

    const SpectralDiagnostics d =
        measure_period(traj.signal_t, traj.signal, std::log(2.0));
    CHECK(d.detected);
    CHECK(std::fabs(d.oscillation_period - std::log(2.0)) < 0.05 * std::log(2.0));
}

TEST_CASE("conservation drift shrinks with dt and h") {
    const auto& op = fixtures::ref_op();
    auto drift_at = [&](std::size_t na, std::size_t ns, double dt) {
        const Setup su = make_setup(na, ns, 80.0, 20.0);
        PopulationState st{0.0, su.stationary};
        RunOptions opts;
        opts.dt = dt;
        opts.t_end = 0.4;
        opts.output_every = 1000000; // final row only
        const TrajectorySummary traj = run(op, std::move(st), opts);
        const double w0 = traj.rows.front().weighted_mass;
        const auto& last = traj.rows.back();
        return std::fabs(last.weighted_mass * std::exp(-last.t) / w0 - 1.0);
    };
    const double coarse = drift_at(129, 65, 4e-3);
    const double fine = drift_at(257, 129, 2e-3);
    CHECK(fine < 0.8 * coarse);
}

TEST_CASE("period measurement on a synthetic signal") {
    std::vector<double> t, g;
    for (int k = 0; k <= 4000; ++k) {
        t.push_back(1e-3 * k);
        g.push_back(3.0 + 0.2 * std::sin(2.0 * M_PI * t.back() / 0.6931));
    }
    const SpectralDiagnostics d = measure_period(t, g, 0.6931);
    CHECK(d.detected);
    CHECK(d.oscillation_period == doctest::Approx(0.6931).epsilon(0.01));
}

TEST_CASE("zero-length run reports only the initial diagnostics") {
    const auto& op = fixtures::ref_op();
    const Setup su = make_setup(65, 65, 30.0, 10.0);
    PopulationState st{0.0, su.stationary};
    RunOptions opts;
    opts.dt = 1e-3;
    opts.t_end = 0.0;
    const TrajectorySummary traj = run(op, std::move(st), opts);
    CHECK(traj.rows.size() == 1);
    CHECK(traj.rows.front().t == 0.0);
}
