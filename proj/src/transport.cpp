#include "adder/transport.hpp"

#include "birth_gather.hpp"
#include "kernels/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adder {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

TransportStepper::TransportStepper(const TransitionOperator& op, Grid1D a_grid,
                                   Grid1D s_grid, double dt)
    : op_(op), a_grid_(std::move(a_grid)), s_grid_(std::move(s_grid)), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("transport: dt must be positive");
    exp_dt_ = std::exp(-dt);
    const double ha = a_grid_.spacing();
    const double max_shift = (a_grid_.s_max() + s_grid_.s_max()) * (1.0 - exp_dt_);
    if (max_shift > ha) {
        std::ostringstream os;
        os << "transport: dt = " << dt << " moves characteristics by " << max_shift
           << " > grid spacing " << ha << "; reduce dt or coarsen the a-grid";
        throw std::invalid_argument(os.str());
    }

    const std::size_t na = a_grid_.size();
    const std::size_t ns = s_grid_.size();
    const auto& sp = op.survivor();

    std::vector<double> psi_node(na);
    for (std::size_t i = 0; i < na; ++i) psi_node[i] = sp.psi(a_grid_.node(i));

    frac_.assign(na * ns, 0.0);
    decay_.assign(na * ns, 0.0);
    for (std::size_t j = 0; j < ns; ++j) {
        const double s = s_grid_.node(j);
        double* fr = frac_.data() + j * na;
        double* de = decay_.data() + j * na;
        for (std::size_t i = 1; i < na; ++i) {
            const double a = a_grid_.node(i);
            const double back = (a + s) * exp_dt_ - s; // in [a - ha, a)
            const double beta =
                std::clamp((back - a_grid_.node(i - 1)) / ha, 0.0, 1.0);
            fr[i] = beta;
            de[i] = exp_dt_ * psi_node[i] / sp.psi(std::max(back, 0.0));
        }
    }

    b_nodes_.assign(na, 0.0);
    jump_node_ = na;
    const double b = op.rate().b;
    for (std::size_t i = 0; i < na; ++i) {
        b_nodes_[i] = op.rate()(a_grid_.node(i));
        if (jump_node_ == na && a_grid_.node(i) >= b - 1e-12 * (1.0 + b)) jump_node_ = i;
    }

    // Stencil plan. Cell i is [a_{i-1}, a_i]; a centered stencil spans
    // nodes i-2..i+1 and must not straddle the survivor kink at node k.
    const std::size_t k = jump_node_;
    auto kink_inside = [&](std::size_t lo, std::size_t hi) {
        return k < na && lo < k && k < hi;
    };
    auto add_sided = [&](std::size_t i, Stencil kind) {
        sided_cells_.push_back(i);
        sided_kind_.push_back(kind);
    };
    std::vector<bool> centered(na, false);
    for (std::size_t i = 1; i < na; ++i) {
        if (i >= 2 && i + 1 < na && !kink_inside(i - 2, i + 1)) {
            centered[i] = true;
            continue;
        }
        if (i == 1 || (k < na && i == k + 1)) {
            // right-sided stencil i-1..i+2
            if (i + 2 < na && !kink_inside(i - 1, i + 2))
                add_sided(i, Stencil::Right);
            else
                add_sided(i, Stencil::Linear);
        } else {
            // left-sided stencil i-3..i
            if (i >= 3 && !kink_inside(i - 3, i))
                add_sided(i, Stencil::Left);
            else
                add_sided(i, Stencil::Linear);
        }
    }
    for (std::size_t i = 1; i < na;) {
        if (!centered[i]) {
            ++i;
            continue;
        }
        std::size_t lo = i;
        while (i < na && centered[i]) ++i;
        centered_ranges_.emplace_back(lo, i - lo);
    }
}

double TransportStepper::sided_value(const double* row, std::size_t cell_index,
                                     double t) const {
    const std::size_t i = sided_cells_[cell_index];
    switch (sided_kind_[cell_index]) {
        case Stencil::Linear:
            return row[i - 1] + t * (row[i] - row[i - 1]);
        case Stencil::Right: {
            // nodes i-1..i+2 at xi = 0,1,2,3
            const double tm1 = t - 1.0, tm2 = t - 2.0, tm3 = t - 3.0;
            return -tm1 * tm2 * tm3 / 6.0 * row[i - 1] + 0.5 * t * tm2 * tm3 * row[i] -
                   0.5 * t * tm1 * tm3 * row[i + 1] + t * tm1 * tm2 / 6.0 * row[i + 2];
        }
        case Stencil::Left: {
            // nodes i-3..i at xi = -2,-1,0,1
            const double tp2 = t + 2.0, tp1 = t + 1.0, tm1 = t - 1.0;
            return -tp1 * t * tm1 / 6.0 * row[i - 3] + 0.5 * tp2 * t * tm1 * row[i - 2] -
                   0.5 * tp2 * tp1 * tm1 * row[i - 1] + tp2 * tp1 * t / 6.0 * row[i];
        }
    }
    return 0.0;
}

void TransportStepper::birth_row(Density2D& m) const {
    const std::size_t ns = s_grid_.size();
    std::vector<double> births(ns, 0.0);
    for (std::size_t j = 0; j < ns; ++j) {
        double acc = 0.0;
        for (const auto& zn : op_.kernel().z_nodes())
            acc += zn.w / (zn.z * zn.z) *
                   detail::birth_inner(m, op_.rate(), s_grid_.node(j) / zn.z);
        births[j] = acc;
    }
    for (std::size_t j = 0; j < ns; ++j) m.value(0, j) = births[j];
}

void TransportStepper::step(PopulationState& state) const {
    Density2D& m = state.m;
    if (!(m.a_grid() == a_grid_) || !(m.second_grid() == s_grid_))
        throw std::invalid_argument("transport: state grids do not match the stepper");
    const std::size_t na = a_grid_.size();
    const std::size_t ns = s_grid_.size();

    // outflow diagnostic: weighted mass crossing the a_max edge this step
    {
        double flux = 0.0;
        for (std::size_t j = 0; j < ns; ++j) {
            const double x_edge = a_grid_.s_max() + s_grid_.node(j);
            flux += s_grid_.weights()[j] * x_edge * x_edge * m.value(na - 1, j);
        }
        state.outflow_mass += flux * dt_;
    }

    std::vector<double> scratch(na);
    for (std::size_t j = 0; j < ns; ++j) {
        double* row = m.row(j);
        const double* fr = frac_.data() + j * na;
        const double* de = decay_.data() + j * na;

        // One-sided cells (domain edges and the cells flanking the rate
        // jump, where a centered stencil would straddle the kink) are
        // evaluated scalar; the smooth interior runs through the vector
        // kernel with the centered stencil.
        for (std::size_t c = 0; c < sided_cells_.size(); ++c) {
            const std::size_t i = sided_cells_[c];
            scratch[i] = de[i] * sided_value(row, c, fr[i]);
        }
        for (const auto& [lo, len] : centered_ranges_)
            kern::lagrange4_mul(scratch.data() + lo, row + lo - 2, row + lo - 1,
                                row + lo, row + lo + 1, fr + lo, de + lo, len);

        double clipped = 0.0;
        for (std::size_t i = 1; i < na; ++i) {
            double v = scratch[i];
            if (v < 0.0) {
                clipped -= v * a_grid_.weights()[i];
                v = 0.0;
            }
            row[i] = v;
        }
        state.clipped_mass += clipped * s_grid_.weights()[j];
        // row[0] keeps the previous boundary value until the birth pass
    }
    birth_row(m);
    state.t += dt_;
}

double TransportStepper::weighted_mass(const Density2D& m) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < s_grid_.size(); ++j) {
        const double s = s_grid_.node(j);
        const double* r = m.row(j);
        double inner = 0.0;
        for (std::size_t i = 0; i < a_grid_.size(); ++i)
            inner += a_grid_.weights()[i] * (a_grid_.node(i) + s) * r[i];
        acc += s_grid_.weights()[j] * inner;
    }
    return acc;
}

double TransportStepper::weighted_mass_in_window(const Density2D& m, double lo,
                                                 double hi) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < s_grid_.size(); ++j) {
        const double s = s_grid_.node(j);
        if (s < lo || s > hi) continue;
        const double* r = m.row(j);
        double inner = 0.0;
        for (std::size_t i = 0; i < a_grid_.size(); ++i)
            inner += a_grid_.weights()[i] * (a_grid_.node(i) + s) * r[i];
        acc += s_grid_.weights()[j] * inner;
    }
    return acc;
}

TrajectorySummary run(const TransitionOperator& op, PopulationState state,
                      const RunOptions& opts) {
    const TransportStepper stepper(op, state.m.a_grid(), state.m.second_grid(), opts.dt);
    TrajectorySummary summary;

    const Density2D* ref =
        opts.entropy_cfg ? &opts.entropy_cfg->stationary : nullptr;

    auto observe = [&]() {
        TrajectoryRow row;
        row.t = state.t;
        row.weighted_mass = stepper.weighted_mass(state.m);
        row.entropy = kNaN;
        row.dissipation = kNaN;
        row.dist_to_ref = kNaN;
        row.domination = kNaN;
        if (opts.entropy_cfg) {
            Density2D scaled = state.m;
            scaled.scale(std::exp(-state.t));
            row.entropy = entropy(*opts.entropy_cfg, scaled);
            row.dissipation = dissipation(*opts.entropy_cfg, op, scaled);
            row.domination = domination_ratio(*opts.entropy_cfg, scaled);
            if (ref) {
                double dist = 0.0;
                for (std::size_t j = 0; j < state.m.second_grid().size(); ++j) {
                    const double s = state.m.second_grid().node(j);
                    const double* a_row = scaled.row(j);
                    const double* r_row = ref->row(j);
                    double inner = 0.0;
                    for (std::size_t i = 0; i < state.m.a_grid().size(); ++i)
                        inner += state.m.a_grid().weights()[i] *
                                 (state.m.a_grid().node(i) + s) *
                                 std::fabs(a_row[i] - r_row[i]);
                    dist += state.m.second_grid().weights()[j] * inner;
                }
                row.dist_to_ref = dist;
            }
        }
        summary.rows.push_back(row);
    };

    auto record_signal = [&]() {
        if (!opts.signal_window) return;
        summary.signal_t.push_back(state.t);
        summary.signal.push_back(
            std::exp(-state.t) *
            stepper.weighted_mass_in_window(state.m, opts.signal_window->first,
                                            opts.signal_window->second));
    };

    observe();
    record_signal();
    if (opts.snapshot_cb && opts.snapshot_every > 0) opts.snapshot_cb(state);

    const long n_steps = std::lround(opts.t_end / opts.dt);
    for (long k = 1; k <= n_steps; ++k) {
        stepper.step(state);
        record_signal();
        if (k % std::max(1, opts.output_every) == 0 || k == n_steps) observe();
        if (opts.snapshot_cb && opts.snapshot_every > 0 && k % opts.snapshot_every == 0)
            opts.snapshot_cb(state);
    }
    summary.clipped_mass = state.clipped_mass;
    summary.outflow_mass = state.outflow_mass;
    return summary;
}

SpectralDiagnostics measure_period(const std::vector<double>& t,
                                   const std::vector<double>& g,
                                   double expected_period) {
    SpectralDiagnostics d;
    d.expected_period = expected_period;
    if (t.size() < 8 || t.size() != g.size()) return d;

    const std::size_t start = t.size() * 3 / 10; // skip the transient
    double mean = 0.0;
    for (std::size_t k = start; k < g.size(); ++k) mean += g[k];
    mean /= static_cast<double>(g.size() - start);

    std::vector<double> crossings;
    for (std::size_t k = start; k + 1 < g.size(); ++k) {
        const double d0 = g[k] - mean, d1 = g[k + 1] - mean;
        if (d0 <= 0.0 && d1 > 0.0) {
            const double frac = d0 == d1 ? 0.0 : -d0 / (d1 - d0);
            crossings.push_back(t[k] + frac * (t[k + 1] - t[k]));
        }
    }
    if (crossings.size() >= 3) {
        d.oscillation_period =
            (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
        d.detected = d.oscillation_period > 0.0;
    }
    return d;
}

} // namespace adder
