#pragma once

#include "adder/density2d.hpp"
#include "adder/model.hpp"

#include <algorithm>
#include <cmath>

// Quadrature backbone for the birth-type integrals
//   inner(u) = int_b^{u - s_min} B(a) q(a, u - a) da
// shared by the transport boundary row, the stationary boundary residual
// and the nu_x measure. Substituting s' = u - a and walking the s'-grid
// nodes samples the steep birth-size direction exactly at nodes; only the
// smooth a-direction is interpolated. The division-rate jump at a = b is
// the upper endpoint of the range, so no cell straddles it.

namespace adder::detail {

// visit(a, s_prime, trapezoid_weight) for every sample of inner(u)
template <class Visit>
inline void visit_birth_samples(const Grid1D& ag, const Grid1D& sg, double b, double u,
                                Visit&& visit) {
    const double s_min = sg.s_min();
    const double hs = sg.spacing();
    const double top = u - std::max(b, 0.0); // largest birth size of a mother
    if (top <= s_min) return;

    const std::size_t j_top = std::min(
        static_cast<std::size_t>(std::floor((std::min(top, sg.s_max()) - s_min) / hs)),
        sg.size() - 1);

    // trapezoid over full s'-cells [s_0, s_{j_top}]
    if (j_top >= 1) {
        for (std::size_t j = 0; j <= j_top; ++j) {
            const double sp = sg.node(j);
            const double a = u - sp;
            if (a < ag.s_min() || a > ag.s_max()) continue;
            double w = hs;
            if (j == 0 || j == j_top) w = 0.5 * hs;
            visit(a, sp, w);
        }
    }
    // partial top cell [s_{j_top}, top]; at s' = top the rate sits at its
    // right limit B(b)
    if (top <= sg.s_max() && j_top + 1 < sg.size()) {
        const double w = 0.5 * (top - sg.node(j_top));
        if (w > 0.0) {
            const double a_at_node = u - sg.node(j_top);
            if (a_at_node >= ag.s_min() && a_at_node <= ag.s_max())
                visit(a_at_node, sg.node(j_top), w);
            const double a_at_top = u - top; // == b when b >= 0
            if (a_at_top >= ag.s_min() && a_at_top <= ag.s_max())
                visit(a_at_top, top, w);
        }
    }
}

// Lagrange cubic on four equispaced values; t measured from the cell-left
// node, cell between the two middle nodes of the stencil.
inline double lagrange_centered(const double* y, double t) {
    // nodes at -1,0,1,2
    const double tm1 = t - 1.0, tp1 = t + 1.0, tm2 = t - 2.0;
    return -t * tm1 * tm2 / 6.0 * y[0] + 0.5 * tp1 * tm1 * tm2 * y[1] -
           0.5 * t * tp1 * tm2 * y[2] + t * tp1 * tm1 / 6.0 * y[3];
}
inline double lagrange_right(const double* y, double t) {
    // nodes at 0,1,2,3; eval cell [0,1]
    const double tm1 = t - 1.0, tm2 = t - 2.0, tm3 = t - 3.0;
    return -tm1 * tm2 * tm3 / 6.0 * y[0] + 0.5 * t * tm2 * tm3 * y[1] -
           0.5 * t * tm1 * tm3 * y[2] + t * tm1 * tm2 / 6.0 * y[3];
}
inline double lagrange_left(const double* y, double t) {
    // nodes at -2,-1,0,1; eval cell [0,1]
    const double tp2 = t + 2.0, tp1 = t + 1.0, tm1 = t - 1.0;
    return -tp1 * t * tm1 / 6.0 * y[0] + 0.5 * tp2 * t * tm1 * y[1] -
           0.5 * tp2 * tp1 * tm1 * y[2] + tp2 * tp1 * t / 6.0 * y[3];
}

// Index of the a-node carrying the rate support edge, or size() when the
// edge is off-grid or outside; sided stencils are then not applicable.
inline std::size_t kink_node(const Grid1D& ag, double b) {
    if (b <= ag.s_min() || b >= ag.s_max()) return ag.size();
    const double p = (b - ag.s_min()) / ag.spacing();
    const double r = std::round(p);
    if (std::fabs(p - r) > 1e-6) return ag.size();
    return static_cast<std::size_t>(r);
}

// Interpolation in a within the fixed-s' column j: cubic where a 4-point
// stencil fits inside one smooth piece (the survivor kink at a-node
// `kink` bounds the pieces), linear otherwise.
inline double column_interp(const Density2D& m, double a, std::size_t j,
                            std::size_t kink) {
    const Grid1D& ag = m.a_grid();
    if (a < ag.s_min() || a > ag.s_max()) return 0.0;
    const std::size_t na = ag.size();
    const double p = (a - ag.s_min()) / ag.spacing();
    const std::size_t i = std::min(static_cast<std::size_t>(p), na - 2);
    const double t = p - static_cast<double>(i);
    const double* col = m.row(j); // contiguous in a

    const bool kink_at_lo = kink < na && kink == i;
    const bool kink_at_hi = kink < na && kink == i + 1;
    if (!kink_at_lo && !kink_at_hi && i >= 1 && i + 2 < na)
        return lagrange_centered(col + i - 1, t);
    if (kink_at_lo && i + 3 < na) return lagrange_right(col + i, t);
    if (kink_at_hi && i >= 2) return lagrange_left(col + i - 2, t);
    return col[i] + t * (col[i + 1] - col[i]);
}

// inner(u) with q = the density m itself
inline double birth_inner(const Density2D& m, const DivisionRate& B, double u) {
    const Grid1D& ag = m.a_grid();
    const Grid1D& sg = m.second_grid();
    const std::size_t kink = kink_node(ag, B.b);
    double acc = 0.0;
    visit_birth_samples(ag, sg, B.b, u, [&](double a, double sp, double w) {
        const double rate = B(a);
        if (rate == 0.0) return;
        const double p = (sp - sg.s_min()) / sg.spacing();
        const std::size_t j =
            std::min(static_cast<std::size_t>(std::llround(p)), sg.size() - 1);
        double q;
        if (std::fabs(p - static_cast<double>(j)) < 1e-9) {
            q = column_interp(m, a, j, kink);
        } else {
            q = m.interp(a, sp);
        }
        acc += w * rate * q;
    });
    return acc;
}

} // namespace adder::detail
