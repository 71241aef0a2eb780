#include "adder/entropy.hpp"

#include "birth_gather.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adder {
namespace {

double max_value(const Density2D& d) {
    double m = 0.0;
    for (double v : d.data()) m = std::max(m, v);
    return m;
}

void require_same_layout(const Density2D& a, const Density2D& b, const char* who) {
    if (a.coords() != Density2D::Coords::IncrementBirthsize ||
        b.coords() != Density2D::Coords::IncrementBirthsize)
        throw std::invalid_argument(std::string(who) + ": (a,s) coordinates required");
    if (!(a.a_grid() == b.a_grid()) || !(a.second_grid() == b.second_grid()))
        throw std::invalid_argument(std::string(who) + ": grids differ");
}

// nu_x gather at birth size x: weights w(a,z) = B(a) N(a, x/z - a) W_a w_z / z^2
// and the matching density ratios r = n/N. Trapezoid in a with the cell at
// the rate jump split at b (right limit), mirroring birth_rhs.
struct NuGather {
    double raw_mass = 0.0;   // sum w / N(0,x)
    double mean_ratio = 0.0; // int r dnu (normalized)
    double mean_h = 0.0;     // int H(r) dnu (normalized)
};

NuGather gather_nu(const EntropyConfig& cfg, const TransitionOperator& op, double x,
                   const Density2D* n) {
    const Density2D& N = cfg.stationary;
    const Grid1D& ag = N.a_grid();
    const Grid1D& sg = N.second_grid();
    const DivisionRate& B = op.rate();
    const double floor = cfg.support_floor * max_value(N);

    const double n0x = N.interp(0.0, x);
    if (!(n0x > floor))
        throw std::domain_error("nu_x: N(0,x) vanishes at this probe size");

    double total_w = 0.0, sum_r = 0.0, sum_h = 0.0;
    const std::size_t kink = detail::kink_node(ag, B.b);

    for (const auto& zn : op.kernel().z_nodes()) {
        const double u = x / zn.z;
        detail::visit_birth_samples(ag, sg, B.b, u, [&](double a, double sp, double qw) {
            const double rate = B(a);
            if (rate == 0.0) return;
            const double p = (sp - sg.s_min()) / sg.spacing();
            const std::size_t j =
                std::min(static_cast<std::size_t>(std::llround(p)), sg.size() - 1);
            const bool on_node = std::fabs(p - static_cast<double>(j)) < 1e-9;
            const double Nv =
                on_node ? detail::column_interp(N, a, j, kink) : N.interp(a, sp);
            if (!(Nv > floor)) return;
            const double w = rate * Nv * qw * zn.w / (zn.z * zn.z);
            if (w <= 0.0) return;
            total_w += w;
            if (n) {
                const double nv =
                    on_node ? detail::column_interp(*n, a, j, kink) : n->interp(a, sp);
                const double r = nv / Nv;
                sum_r += w * r;
                sum_h += w * cfg.h(r);
            }
        });
    }

    NuGather out;
    out.raw_mass = total_w / n0x;
    if (n && total_w > 0.0) {
        out.mean_ratio = sum_r / total_w;
        out.mean_h = sum_h / total_w;
    }
    return out;
}

} // namespace

HFunction HFunction::tabulated(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("HFunction: table needs at least three points");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("HFunction: abscissae must increase");
    // midpoint convexity on the table
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double lam = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        const double chord = (1.0 - lam) * y[i - 1] + lam * y[i + 1];
        if (y[i] > chord + 1e-12 * (1.0 + std::fabs(chord)))
            throw std::invalid_argument("HFunction: table is not convex");
    }
    HFunction h(Kind::Tabulated);
    h.tab_x_ = std::move(x);
    h.tab_y_ = std::move(y);
    return h;
}

double HFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::Identity:
            return x;
        case Kind::AbsoluteDeviation:
            return std::fabs(1.0 - x);
        case Kind::Quadratic:
            return (1.0 - x) * (1.0 - x);
        case Kind::Tabulated: {
            // linear extension beyond the table keeps convexity
            if (x <= tab_x_.front()) {
                const double sl = (tab_y_[1] - tab_y_[0]) / (tab_x_[1] - tab_x_[0]);
                return tab_y_.front() + sl * (x - tab_x_.front());
            }
            if (x >= tab_x_.back()) {
                const std::size_t k = tab_x_.size() - 1;
                const double sl = (tab_y_[k] - tab_y_[k - 1]) / (tab_x_[k] - tab_x_[k - 1]);
                return tab_y_.back() + sl * (x - tab_x_.back());
            }
            const auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - tab_x_.begin()) - 1;
            const double t = (x - tab_x_[i]) / (tab_x_[i + 1] - tab_x_[i]);
            return tab_y_[i] + t * (tab_y_[i + 1] - tab_y_[i]);
        }
    }
    return 0.0;
}

double entropy(const EntropyConfig& cfg, const Density2D& n) {
    require_same_layout(cfg.stationary, n, "entropy");
    const Density2D& N = cfg.stationary;
    const Grid1D& ag = N.a_grid();
    const Grid1D& sg = N.second_grid();
    const double floor = cfg.support_floor * max_value(N);

    double acc = 0.0;
    for (std::size_t j = 0; j < sg.size(); ++j) {
        const double s = sg.node(j);
        const double* Nr = N.row(j);
        const double* nr = n.row(j);
        double inner = 0.0;
        for (std::size_t i = 0; i < ag.size(); ++i) {
            if (!(Nr[i] > floor)) continue; // outside the stationary support
            const double x = ag.node(i) + s;
            inner += ag.weights()[i] * x * Nr[i] * cfg.h(nr[i] / Nr[i]);
        }
        acc += sg.weights()[j] * inner;
    }
    return acc;
}

double domination_ratio(const EntropyConfig& cfg, const Density2D& n) {
    require_same_layout(cfg.stationary, n, "domination_ratio");
    const Density2D& N = cfg.stationary;
    const double floor = cfg.support_floor * max_value(N);
    double m = 0.0;
    for (std::size_t k = 0; k < N.data().size(); ++k)
        if (N.data()[k] > floor) m = std::max(m, n.data()[k] / N.data()[k]);
    return m;
}

double dissipation(const EntropyConfig& cfg, const TransitionOperator& op,
                   const Density2D& n) {
    require_same_layout(cfg.stationary, n, "dissipation");
    const Density2D& N = cfg.stationary;
    const Grid1D& sg = N.second_grid();
    const double floor = cfg.support_floor * max_value(N);

    double weight_cap = 0.0;
    for (std::size_t j = 0; j < sg.size(); ++j) {
        const double x = sg.node(j);
        weight_cap = std::max(weight_cap, x * x * N.value(0, j));
    }
    // birth sizes whose nu support fits inside the s-window; beyond this the
    // gather is truncated by the domain cut and only the (exact) Jensen sign
    // survives, not the unit mass
    const double x_covered = op.theta() * (sg.s_max() + op.rate().b);

    double acc = 0.0;
    for (std::size_t j = 0; j < sg.size(); ++j) {
        const double x = sg.node(j); // newborn size
        const double n0x = N.value(0, j);
        if (!(n0x > floor)) continue;
        const double weight = x * x * n0x;
        if (weight < 1e-9 * weight_cap) continue; // negligible contribution
        const NuGather g = gather_nu(cfg, op, x, &n);
        if (g.raw_mass <= 0.0) continue;
        if ((g.raw_mass < 0.99 || g.raw_mass > 1.01) && x <= x_covered &&
            weight > 1e-4 * weight_cap) {
            // measure failed to integrate to ~1 where it matters: the
            // boundary relation is broken at this probe size
            throw std::domain_error("dissipation: nu_x mass deviates from 1 beyond 1e-2");
        }
        const double gap = g.mean_h - cfg.h(g.mean_ratio);
        acc += sg.weights()[j] * weight * gap;
    }
    return acc;
}

double nu_x_mass(const EntropyConfig& cfg, const TransitionOperator& op, double x) {
    if (cfg.stationary.coords() != Density2D::Coords::IncrementBirthsize)
        throw std::invalid_argument("nu_x_mass: (a,s) coordinates required");
    return gather_nu(cfg, op, x, nullptr).raw_mass;
}

} // namespace adder
