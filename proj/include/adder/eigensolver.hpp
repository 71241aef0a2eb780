#pragma once

#include "adder/operator.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace adder {

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, double residual_, int iterations_)
        : std::runtime_error(msg), residual(residual_), iterations(iterations_) {}
    double residual;
    int iterations;
};

// Principal eigenpair of the truncated operator T_Sigma.
struct EigenResult {
    double rho = 0.0;
    GridFunction f;        // nonnegative, int f = 1
    double sigma = 0.0;
    int iterations = 0;
    double residual = 0.0; // ||Tf - rho f||_L1
};

struct PowerOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    // optional custom positive initial iterate on [b_theta, Sigma]
    std::optional<GridFunction> initial;
};

// Power iteration f <- Tf/||Tf||_1 from 1_{[b_theta, Sigma]} on an n-node
// grid. rho is the L1 growth factor at convergence. Requires
// Sigma > max(b/(1-theta), 1).
EigenResult power_iterate(const TransitionOperator& op, double sigma, std::size_t n,
                          const PowerOptions& opts = {});

// Spectral-radius bracket for T_Sigma:
//   1 - Psi((1/eta - 1) Sigma) <= rho_Sigma <= 1 - Psi(Sigma/theta - b_theta).
std::pair<double, double> rho_bounds(const TransitionOperator& op, double sigma);

// Residual of the integrated eigenvalue identity
//   rho int f = int f - int int z Psi(Sigma/z - a) f(a) da dmu(z).
double rho_identity_residual(const TransitionOperator& op, const EigenResult& result);

struct SweepRow {
    double sigma;
    double rho;
    double one_minus_rho;
    double psi_lower;  // Psi((1/eta - 1) Sigma), the bound on 1 - rho
    double f_diff;     // ||f_Sigma - f_{Sigma_max}||_1 on the common domain
    int iterations;
};

// Runs the solver for each Sigma and tabulates convergence diagnostics
// against the largest truncation.
std::vector<SweepRow> sigma_sweep(const TransitionOperator& op,
                                  const std::vector<double>& sigmas, std::size_t n,
                                  const PowerOptions& opts = {});

} // namespace adder
