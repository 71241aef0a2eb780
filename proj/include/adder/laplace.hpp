#pragma once

#include "adder/operator.hpp"

#include <vector>

namespace adder {

// Laplace transform of a grid function at rate y >= 0, by trapezoid.
double laplace(const GridFunction& f, double y);

struct LaplaceProfile {
    std::vector<double> y_grid;
    std::vector<double> values; // L[f](y)
};

LaplaceProfile laplace_profile(const GridFunction& f, const std::vector<double>& y_grid);

// {0} union {2^j : j = -4..4}
std::vector<double> default_y_grid();

struct LaplaceValidation {
    std::vector<double> y_grid;
    std::vector<double> lf;        // L[f](y)
    std::vector<double> residuals; // |L[f](y) - int L[f](zy) L[Phi](zy) z dmu(z)|
    double max_residual = 0.0;
    double phi_tail = 0.0;   // Phi mass beyond the evaluation lattice
    double f_tail_bound = 0.0; // e^{-y_min s_max} * (f mass at the upper grid edge cell)
};

// Residuals of the Laplace-domain fixed-point identity
//   L[f](y) = int L[f](zy) L[Phi](zy) z dmu(z),
// the transform of the convolution form of Tf = f.
LaplaceValidation fixed_point_residual_laplace(const GridFunction& f,
                                               const TransitionOperator& op,
                                               const std::vector<double>& y_grid);

} // namespace adder
