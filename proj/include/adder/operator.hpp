#pragma once

#include "adder/grid.hpp"
#include "adder/model.hpp"

namespace adder {

// Birth-size transition operator
//   T f(s) = int_theta^eta int_0^{s/z} Phi(s/z - a) f(a) da dmu(z).
//
// The inner integral is discretized on the lattice sigma_j = j*h of the
// input grid: Phi is projected onto the hat basis by exact integration
// (so the jump of Phi at a = b is integrated exactly and the lattice
// carries the exact Phi mass), and f enters through its piecewise-linear
// interpolant, zero outside [s_min, s_max]. Because the shifted sample
// points u - j*h share one fractional offset, the whole double integral
// reduces to a single lattice correlation reused by every z node.
//
// With f supported in [b_theta, Sigma] and the zero-extension convention
// this application simultaneously realizes the truncated operator
// T_Sigma on [b_theta, Sigma].
class TransitionOperator {
public:
    TransitionOperator(FragmentationKernel kernel, DivisionRate rate);

    const FragmentationKernel& kernel() const { return kernel_; }
    const SurvivorPair& survivor() const { return survivor_; }
    const DivisionRate& rate() const { return survivor_.rate(); }
    double theta() const { return kernel_.theta(); }
    double eta() const { return kernel_.eta(); }
    double b_theta() const { return b_theta_; }
    const HypothesisReport& hypotheses() const { return report_; }

    // T f on the same grid as f.
    GridFunction apply(const GridFunction& f) const;

    // Hat-basis projection of Phi on the lattice {0, h, 2h, ...}:
    // w[j] = int Phi(sigma) hat_j(sigma) dsigma. Sums to the Phi mass
    // captured by the lattice, 1 - O(Psi(count*h)).
    std::vector<double> phi_hat_weights(double h, std::size_t count) const;

private:
    FragmentationKernel kernel_;
    SurvivorPair survivor_;
    HypothesisReport report_;
    double b_theta_;
};

// ||Tf||_{(1+s^l)} / ||f||_{(1+s^l)}; bounded by theta^l up to quadrature
// error for nonnegative f. Requires a nonzero f and s_min > 0 when l < 0.
double weighted_gain(const TransitionOperator& op, const GridFunction& f, double l);

} // namespace adder
