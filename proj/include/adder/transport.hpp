#pragma once

#include "adder/density2d.hpp"
#include "adder/entropy.hpp"
#include "adder/operator.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace adder {

// Time-dependent population in increment/birth-size coordinates:
// m(t,a,s) = n(t,a,a+s).
struct PopulationState {
    double t = 0.0;
    Density2D m;
    double clipped_mass = 0.0;  // cumulative, from the positivity clip
    double outflow_mass = 0.0;  // cumulative weighted mass advected past a_max
};

// Exact-characteristic semi-Lagrangian stepper. Along da/dtau = a+s the
// trace-back is a' = (a+s) e^{-dt} - s and the decay over the step is
// e^{-dt} Psi(a)/Psi(a'), since int B(a(tau)) x(tau) dtau telescopes into
// the increment integral of B. Births enter through the a=0 boundary row
// evaluated from the advected field with the same z-quadrature as T.
class TransportStepper {
public:
    TransportStepper(const TransitionOperator& op, Grid1D a_grid, Grid1D s_grid,
                     double dt);

    const Grid1D& a_grid() const { return a_grid_; }
    const Grid1D& s_grid() const { return s_grid_; }
    double dt() const { return dt_; }

    // one step of size dt(); advances state.t and mutates state.m
    void step(PopulationState& state) const;

    // int int (a+s) m da ds
    double weighted_mass(const Density2D& m) const;
    // weighted mass restricted to s in [lo, hi]
    double weighted_mass_in_window(const Density2D& m, double lo, double hi) const;

private:
    const TransitionOperator& op_;
    Grid1D a_grid_;
    Grid1D s_grid_;
    double dt_;
    double exp_dt_;
    std::vector<double> frac_;   // per (s,a): interpolation fraction of the trace-back
    std::vector<double> decay_;  // per (s,a): e^{-dt} Psi(a)/Psi(a')
    std::vector<double> b_nodes_; // B at a-nodes (right limit at the jump)
    std::size_t jump_node_;       // a-index of the rate support edge, or size()

    enum class Stencil { Linear, Left, Right };
    std::vector<std::size_t> sided_cells_;
    std::vector<Stencil> sided_kind_; // parallel to sided_cells_
    std::vector<std::pair<std::size_t, std::size_t>> centered_ranges_; // (first, count)
    double sided_value(const double* row, std::size_t cell_index, double t) const;

    void birth_row(Density2D& m) const;
};

struct TrajectoryRow {
    double t;
    double weighted_mass;
    double entropy;     // H[n e^{-t}], NaN when no entropy config given
    double dissipation; // D[n e^{-t}], NaN likewise
    double dist_to_ref; // ||m e^{-t} - M||_{L1((a+s) da ds)}, NaN without reference
    double domination;  // max m e^{-t} / M over the reference support
};

struct RunOptions {
    double dt = 1e-3;
    double t_end = 1.0;
    int output_every = 10;
    const EntropyConfig* entropy_cfg = nullptr; // also provides the reference M
    std::optional<std::pair<double, double>> signal_window; // s-range observer
    std::function<void(const PopulationState&)> snapshot_cb;
    int snapshot_every = 0;
};

struct TrajectorySummary {
    std::vector<TrajectoryRow> rows;
    // renormalized windowed weighted mass, recorded every step
    std::vector<double> signal_t;
    std::vector<double> signal;
    double clipped_mass = 0.0;
    double outflow_mass = 0.0;
};

TrajectorySummary run(const TransitionOperator& op, PopulationState state,
                      const RunOptions& opts);

struct SpectralDiagnostics {
    double oscillation_period = 0.0;
    double expected_period = 0.0; // log 2 for equal mitosis
    bool detected = false;
};

// Period of an oscillating signal from mean-crossing spacing over the tail
// half of the record.
SpectralDiagnostics measure_period(const std::vector<double>& t,
                                   const std::vector<double>& g,
                                   double expected_period);

} // namespace adder
