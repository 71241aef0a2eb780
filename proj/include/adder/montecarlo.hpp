#pragma once

#include "adder/grid.hpp"
#include "adder/model.hpp"
#include "adder/operator.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace adder {

// Markov chain on birth sizes: s' = z (s + Delta) with Delta drawn from the
// division-increment density Phi and z from the offspring-fraction law
// z dmu(z), which is a probability measure by mass conservation. One step of
// the chain maps a birth-size law f to Tf, so the stationary law is the
// normalized fixed point.
class ChainSampler {
public:
    ChainSampler(FragmentationKernel kernel, DivisionRate rate, std::uint64_t seed,
                 std::size_t burn_in = 1000, std::size_t n_samples = 100000);

    std::size_t burn_in() const { return burn_in_; }
    std::size_t n_samples() const { return n_samples_; }

    // one transition from birth size s
    double transition(double s, std::mt19937_64& rng) const;

    // runs the chain from s0 and records n_samples birth sizes after burn_in
    std::vector<double> sample_chain(double s0) const;

    // draw an offspring fraction from z dmu(z)
    double draw_fraction(std::mt19937_64& rng) const;
    // draw a division increment from Phi
    double draw_increment(std::mt19937_64& rng) const;

    const SurvivorPair& survivor() const { return survivor_; }
    std::uint64_t seed() const { return seed_; }

private:
    FragmentationKernel kernel_;
    SurvivorPair survivor_;
    std::uint64_t seed_;
    std::size_t burn_in_;
    std::size_t n_samples_;
    // atoms: cumulative probabilities w_i z_i; density: fine inverse-CDF table
    std::vector<double> atom_cum_;
    double atom_total_ = 0.0;
    std::vector<double> density_z_;
    std::vector<double> density_cum_;
};

// Inverse-CDF sampler for a nonnegative grid function interpreted as a
// piecewise-linear density (normalized internally).
class GridDensitySampler {
public:
    explicit GridDensitySampler(const GridFunction& f);
    ~GridDensitySampler();
    GridDensitySampler(const GridDensitySampler&) = delete;
    GridDensitySampler& operator=(const GridDensitySampler&) = delete;
    double draw(std::mt19937_64& rng) const;

private:
    struct Impl;
    Impl* impl_;
};

// Kolmogorov-Smirnov statistic between the empirical law of the samples and
// the trapezoid CDF of the (normalized) grid density f.
double ks_distance(std::vector<double> samples, const GridFunction& f);

struct ChiSquareTest {
    double statistic = 0.0;
    double p_value = 0.0;
    int dof = 0;
    std::size_t used_samples = 0;
};

// Bins one-step outputs started from s ~ f and compares against the
// predicted law Tf via a chi-square test (bins merged to expected >= 5).
ChiSquareTest one_step_chi_square(const ChainSampler& sampler, const GridFunction& f,
                                  const TransitionOperator& op, std::size_t n_samples,
                                  std::uint64_t seed, std::size_t n_bins = 48);

// Upper regularized incomplete gamma Q(a,x); Q(dof/2, x/2) is the chi-square
// tail probability.
double gamma_q(double a, double x);

} // namespace adder
