#include <doctest.h>

#include "adder/model.hpp"

#include <cmath>
#include <stdexcept>
#include <random>

using namespace adder;

namespace {

// reference setup: B(a) = 2/(1+a) for a >= 1, mu = 2*delta_{1/2}
DivisionRate ref_rate() { return DivisionRate::shifted_hyperbolic(2.0, 1.0); }

// independent closed form: int_1^a 2/(1+z) dz = 2 ln((1+a)/2),
// so Psi(a) = exp(-2 ln((1+a)/2)) = 4/(1+a)^2 for a >= 1
double psi_oracle(double a) {
    if (a <= 1.0) return 1.0;
    return std::exp(-2.0 * std::log((1.0 + a) / 2.0));
}

} // namespace

TEST_CASE("survivor function of the shifted-hyperbolic rate") {
    const auto rate = ref_rate();
    CHECK(survivor(rate, 0.5) == 1.0);
    CHECK(survivor(rate, 1.0) == 1.0);
    CHECK(survivor(rate, 3.0) == doctest::Approx(0.25).epsilon(1e-13));
    for (double a : {1.3, 2.0, 7.7, 40.0})
        CHECK(survivor(rate, a) == doctest::Approx(psi_oracle(a)).epsilon(1e-13));
    CHECK_THROWS_AS(survivor(rate, -0.1), std::domain_error);
}

TEST_CASE("division density Phi = B Psi") {
    const auto rate = ref_rate();
    CHECK(phi_density(rate, 0.9) == 0.0);
    CHECK(phi_density(rate, 3.0) == doctest::Approx(0.125).epsilon(1e-13)); // 8/(1+a)^3
    // survivor is nonincreasing on a sampled grid
    const SurvivorPair sp(rate);
    double prev = 1.0;
    for (int i = 0; i <= 400; ++i) {
        const double cur = sp.psi(0.05 * i);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("Phi mass approaches 1 from below as the window grows") {
    const SurvivorPair sp(ref_rate());
    // trapezoid on [b, A]; the integrand is continuous there
    auto phi_mass = [&](double A, std::size_t n) {
        const double h = (A - 1.0) / static_cast<double>(n - 1);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = 1.0 + h * static_cast<double>(i);
            const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
            acc += w * sp.phi(a);
        }
        return acc;
    };
    double prev = 0.0;
    for (double A : {5.0, 20.0, 80.0, 200.0}) {
        const double q = phi_mass(A, 40001);
        CHECK(q > prev);
        CHECK(q < 1.0);
        prev = q;
    }
    // int_1^A Phi = 1 - Psi(A) analytically
    CHECK(std::fabs(phi_mass(200.0, 120001) - (1.0 - psi_oracle(200.0))) < 1e-6);
}

TEST_CASE("closed-form survivor integrals") {
    const SurvivorPair sp(ref_rate());
    // int_0^inf Psi = 1 + int_1^inf 4/(1+a)^2 da = 3
    CHECK(sp.psi_total() == doctest::Approx(3.0).epsilon(1e-14));
    // cross-check psi_integral against fine Simpson
    auto simpson = [&](double x1, double x2) {
        const int n = 4000;
        const double h = (x2 - x1) / n;
        double acc = sp.psi(x1) + sp.psi(x2);
        for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * sp.psi(x1 + i * h);
        return acc * h / 3.0;
    };
    for (auto [x1, x2] : {std::pair{0.0, 0.7}, {0.5, 1.5}, {1.0, 4.0}, {3.3, 9.9}})
        CHECK(sp.psi_integral(x1, x2) == doctest::Approx(simpson(x1, x2)).epsilon(1e-9));
}

TEST_CASE("survivor families: constant and power-law") {
    const SurvivorPair ce(DivisionRate::constant_after(1.5, 2.0));
    CHECK(ce.psi(1.0) == 1.0);
    CHECK(ce.psi(3.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    CHECK(ce.psi_total() == doctest::Approx(2.0 + 1.0 / 1.5).epsilon(1e-14));
    CHECK(ce.increment_quantile(0.5) ==
          doctest::Approx(2.0 + std::log(2.0) / 1.5).epsilon(1e-13));

    const SurvivorPair pl(DivisionRate::power_law(0.8, 1.5, 0.5));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(0.0, 0.999);
    for (int i = 0; i < 50; ++i) {
        const double u = d(rng);
        CHECK(1.0 - pl.psi(pl.increment_quantile(u)) == doctest::Approx(u).epsilon(1e-10));
    }
}

TEST_CASE("tabulated rate reproduces its closed-form source") {
    const auto ref = ref_rate();
    const SurvivorPair sp_ref(ref);
    std::vector<double> a, B;
    for (int i = 0; i <= 4000; ++i) {
        a.push_back(1.0 + 0.01 * i);
        B.push_back(2.0 / (1.0 + a.back()));
    }
    const SurvivorPair sp_tab(DivisionRate::tabulated(std::move(a), std::move(B)));
    CHECK_FALSE(sp_tab.closed_form());
    for (double x : {0.5, 1.0, 2.0, 10.0, 35.0})
        CHECK(sp_tab.psi(x) == doctest::Approx(sp_ref.psi(x)).epsilon(1e-4));
    CHECK(sp_tab.increment_quantile(0.5) ==
          doctest::Approx(sp_ref.increment_quantile(0.5)).epsilon(1e-4));
}

TEST_CASE("decay exponent estimate tracks the family parameter") {
    for (double c : {0.5, 2.0, 3.7}) {
        const SurvivorPair sp(DivisionRate::shifted_hyperbolic(c, 1.0));
        CHECK(sp.k0() == c);
        CHECK(std::fabs(sp.estimate_k0() - c) / c < 0.05);
    }
}

TEST_CASE("hypothesis report for the reference setup") {
    const auto rep = check_hypotheses(FragmentationKernel::equal_mitosis(), ref_rate());
    CHECK(rep.pass());
    CHECK(rep.theta == 0.5);
    CHECK(rep.eta == 0.5);
    CHECK(std::fabs(rep.k0_estimate - 2.0) < 0.1);
}

TEST_CASE("hypothesis failures are reported, not thrown") {
    // single atom at 1/2 with weight 1: int z dmu = 1/2
    const auto bad_mass = FragmentationKernel::from_atoms({{0.5, 1.0}});
    const auto rep1 = check_hypotheses(bad_mass, ref_rate());
    CHECK_FALSE(rep1.pass());
    bool mass_failed = false;
    for (const auto& c : rep1.checks)
        if (c.name == "mass conservation") mass_failed = !c.pass;
    CHECK(mass_failed);

    // density supported up to 1: support not compact inside (0,1)
    const auto bad_support = FragmentationKernel::uniform_density(0.5, 1.0);
    const auto rep2 = check_hypotheses(bad_support, ref_rate());
    CHECK_FALSE(rep2.pass());
    bool supp_failed = false;
    for (const auto& c : rep2.checks)
        if (c.name == "compact support inside (0,1)") supp_failed = !c.pass;
    CHECK(supp_failed);
}

TEST_CASE("uniform-density kernel satisfies mass conservation by construction") {
    const auto k = FragmentationKernel::uniform_density(0.4, 0.8);
    CHECK(std::fabs(k.first_moment() - 1.0) < 1e-12);
    CHECK(k.theta() == 0.4);
    CHECK(k.eta() == 0.8);
    CHECK(k.total_mass() == doctest::Approx(2.0 / 1.2).epsilon(1e-12));
    CHECK(check_hypotheses(k, ref_rate()).pass());
}

TEST_CASE("left support edge of the fixed point") {
    CHECK(b_theta(FragmentationKernel::equal_mitosis(), ref_rate()) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b_theta(FragmentationKernel::equal_mitosis(),
                  DivisionRate::shifted_hyperbolic(2.0, 0.0)) == 0.0);
    // theta = 1/3, b = 2 -> (1/3)/(2/3)*2 = 1
    const auto k3 = FragmentationKernel::from_atoms({{1.0 / 3.0, 3.0}});
    CHECK(b_theta(k3, DivisionRate::shifted_hyperbolic(2.0, 2.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));
}
