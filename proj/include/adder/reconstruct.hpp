#pragma once

#include "adder/density2d.hpp"
#include "adder/operator.hpp"

namespace adder {

// Stationary density in increment/birth-size coordinates:
//   M(a,s) = Psi(a) f(s) / (a+s)^2, normalized to unit integral.
// The a-grid should place the rate's support edge b on a node
// (grid_through_point does this).
Density2D build_M(const GridFunction& f, const SurvivorPair& survivor,
                  const Grid1D& a_grid);

// Change of variables x = a + s: N(a,x) = M(a, x-a), resampled on the
// requested x-grid, zero where x - a is left of the birth-size grid.
Density2D build_N(const Density2D& m, const Grid1D& x_grid);

// Picks an a-grid upper end so the truncated share of int_0^inf Psi is below
// tail_fraction (capped), with the support edge b snapped onto a node.
Grid1D default_a_grid(const SurvivorPair& survivor, std::size_t n,
                      double tail_fraction = 1e-6, double a_cap = 4e3);

// Right-hand side of the birth boundary relation at birth size s:
//   int int B(a) M(a, s/z - a) da dmu(z)/z^2,
// trapezoid in a with the cell straddling b split at b.
double birth_rhs(const Density2D& m, const TransitionOperator& op, double s);

// L1 distance over the birth-size grid between M(0,s) and the boundary
// integral; equals the fixed-point defect of f up to bounded weights.
double boundary_residual(const Density2D& m, const TransitionOperator& op);

enum class TransportForm {
    Mass,         // d_a((a+s)M) + (1+(a+s)B)M = 0
    Conservative, // d_a((a+s)^2 M) + (a+s)^2 B M = 0 along s-lines
};

// L1-averaged central finite-difference residual of the stationary transport
// relation, skipping a 2h neighborhood of the rate jump at a = b.
double transport_residual(const Density2D& m, const DivisionRate& rate,
                          TransportForm form = TransportForm::Mass);

} // namespace adder
