#include "adder/reconstruct.hpp"

#include "birth_gather.hpp"

#include <cmath>
#include <stdexcept>

namespace adder {

Density2D build_M(const GridFunction& f, const SurvivorPair& survivor,
                  const Grid1D& a_grid) {
    const Grid1D& s_grid = f.grid;
    if (a_grid.s_min() + s_grid.s_min() <= 0.0)
        throw std::invalid_argument("build_M: (a+s)^-2 singular, need s_min > 0");

    Density2D m(Density2D::Coords::IncrementBirthsize, a_grid, s_grid);
    std::vector<double> psi(a_grid.size());
    for (std::size_t i = 0; i < a_grid.size(); ++i) psi[i] = survivor.psi(a_grid.node(i));

    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        const double s = s_grid.node(j);
        const double fs = f.values[j];
        double* r = m.row(j);
        for (std::size_t i = 0; i < a_grid.size(); ++i) {
            const double x = a_grid.node(i) + s;
            r[i] = psi[i] * fs / (x * x);
        }
    }
    const double z = m.total_integral();
    if (!(z > 0.0)) throw std::domain_error("build_M: zero profile cannot be normalized");
    m.scale(1.0 / z);
    m.set_normalization_constant(z);
    return m;
}

Density2D build_N(const Density2D& m, const Grid1D& x_grid) {
    if (m.coords() != Density2D::Coords::IncrementBirthsize)
        throw std::invalid_argument("build_N: input must be in (a,s) coordinates");
    const Grid1D& a_grid = m.a_grid();
    Density2D n(Density2D::Coords::IncrementSize, a_grid, x_grid);
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        const double x = x_grid.node(j);
        double* r = n.row(j);
        for (std::size_t i = 0; i < a_grid.size(); ++i) {
            const double s = x - a_grid.node(i);
            if (s < m.second_grid().s_min()) {
                r[i] = 0.0;
                continue;
            }
            // interpolate along s within the fixed-a column
            const Grid1D& sg = m.second_grid();
            if (s > sg.s_max()) {
                r[i] = 0.0;
                continue;
            }
            const double p = (s - sg.s_min()) / sg.spacing();
            std::size_t is = std::min(static_cast<std::size_t>(p), sg.size() - 2);
            const double t = p - static_cast<double>(is);
            r[i] = m.value(i, is) + t * (m.value(i, is + 1) - m.value(i, is));
        }
    }
    n.set_normalization_constant(m.normalization_constant());
    return n;
}

Grid1D default_a_grid(const SurvivorPair& survivor, std::size_t n, double tail_fraction,
                      double a_cap) {
    // The integrand behind the a-extent is Psi(a)/(a+s)^2, so the truncated
    // share is bounded by (int_A^inf Psi)/(A+1)^2 against the S_inf scale.
    const double total = survivor.psi_total();
    double a_max = a_cap;
    if (std::isfinite(total)) {
        auto tail_ok = [&](double A) {
            const double psi_tail = total - survivor.psi_integral(0.0, A);
            return psi_tail / ((A + 1.0) * (A + 1.0)) <= tail_fraction * total;
        };
        double lo = survivor.rate().b + 1.0, hi = a_cap;
        if (!tail_ok(hi)) {
            a_max = a_cap;
        } else {
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (tail_ok(mid))
                    hi = mid;
                else
                    lo = mid;
            }
            a_max = hi;
        }
    } else {
        // no finite integral: fall back to a pointwise threshold
        double hi = survivor.rate().b + 1.0;
        while (survivor.psi(hi) > 1e-8 && hi < a_cap) hi *= 1.5;
        a_max = std::min(hi, a_cap);
    }
    a_max = std::max(a_max, 4.0 * (survivor.rate().b + 1.0));
    return grid_through_point(a_max, n, survivor.rate().b);
}

double birth_rhs(const Density2D& m, const TransitionOperator& op, double s) {
    if (m.coords() != Density2D::Coords::IncrementBirthsize)
        throw std::invalid_argument("birth_rhs: input must be in (a,s) coordinates");
    double acc = 0.0;
    for (const auto& zn : op.kernel().z_nodes())
        acc += zn.w / (zn.z * zn.z) * detail::birth_inner(m, op.rate(), s / zn.z);
    return acc;
}

double boundary_residual(const Density2D& m, const TransitionOperator& op) {
    const Grid1D& sg = m.second_grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < sg.size(); ++j) {
        const double lhs = m.value(0, j);
        const double rhs = birth_rhs(m, op, sg.node(j));
        acc += sg.weights()[j] * std::fabs(lhs - rhs);
    }
    return acc;
}

double transport_residual(const Density2D& m, const DivisionRate& rate, TransportForm form) {
    const Grid1D& ag = m.a_grid();
    const Grid1D& sg = m.second_grid();
    const double h = ag.spacing();
    double num = 0.0, measure = 0.0;
    for (std::size_t j = 0; j < sg.size(); ++j) {
        const double s = sg.node(j);
        const double* r = m.row(j);
        for (std::size_t i = 1; i + 1 < ag.size(); ++i) {
            const double a = ag.node(i);
            if (std::fabs(a - rate.b) <= 2.0 * h) continue; // PDE holds a.e., not across the jump
            const double w = ag.weights()[i] * sg.weights()[j];
            double res;
            if (form == TransportForm::Mass) {
                const double flux_p = (ag.node(i + 1) + s) * r[i + 1];
                const double flux_m = (ag.node(i - 1) + s) * r[i - 1];
                res = (flux_p - flux_m) / (2.0 * h) + (1.0 + (a + s) * rate(a)) * r[i];
            } else {
                const double xp = ag.node(i + 1) + s, xm = ag.node(i - 1) + s;
                const double x = a + s;
                res = (xp * xp * r[i + 1] - xm * xm * r[i - 1]) / (2.0 * h) +
                      x * x * rate(a) * r[i];
            }
            num += w * std::fabs(res);
            measure += w;
        }
    }
    return measure > 0.0 ? num / measure : 0.0;
}

} // namespace adder
