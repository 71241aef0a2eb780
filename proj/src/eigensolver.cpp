#include "adder/eigensolver.hpp"

#include "kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adder {
namespace {

void normalize_l1(GridFunction& f) {
    const double mass = integrate(f);
    if (!(mass > 0.0)) throw std::domain_error("power_iterate: iterate lost all mass");
    kern::scale(f.values.data(), 1.0 / mass, f.size());
}

} // namespace

EigenResult power_iterate(const TransitionOperator& op, double sigma, std::size_t n,
                          const PowerOptions& opts) {
    const double threshold = std::max(op.rate().b / (1.0 - op.theta()), 1.0);
    if (!(sigma > threshold)) {
        std::ostringstream os;
        os << "power_iterate: Sigma = " << sigma << " must exceed max(b/(1-theta),1) = "
           << threshold;
        throw std::domain_error(os.str());
    }

    const Grid1D grid(op.b_theta(), sigma, n);
    GridFunction f = opts.initial ? resample(*opts.initial, grid) : GridFunction(grid, 1.0);
    for (double& v : f.values)
        if (v < 0.0) v = 0.0;
    normalize_l1(f);

    double rho = 0.0;
    double residual = 0.0;
    const auto& w = grid.weights();
    std::vector<double> scaled(n);

    for (int it = 1; it <= opts.max_iter; ++it) {
        GridFunction g = op.apply(f);
        for (double& v : g.values) v = std::max(v, 0.0);
        rho = integrate(g);
        if (!(rho > 0.0)) throw std::domain_error("power_iterate: operator annihilated iterate");

        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            residual += w[i] * std::fabs(g.values[i] - rho * f.values[i]);

        kern::scale(g.values.data(), 1.0 / rho, n);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            delta += w[i] * std::fabs(g.values[i] - f.values[i]);
        f.values.swap(g.values);

        if (delta < opts.tol || residual < opts.tol) {
            normalize_l1(f);
            return EigenResult{rho, std::move(f), sigma, it, residual};
        }
    }
    std::ostringstream os;
    os << "power_iterate: no convergence after " << opts.max_iter
       << " iterations, last residual " << residual;
    throw ConvergenceError(os.str(), residual, opts.max_iter);
}

std::pair<double, double> rho_bounds(const TransitionOperator& op, double sigma) {
    if (!(sigma > op.b_theta()))
        throw std::domain_error("rho_bounds: Sigma must exceed b_theta");
    const auto& sp = op.survivor();
    const double lower = 1.0 - sp.psi((1.0 / op.eta() - 1.0) * sigma);
    const double upper = 1.0 - sp.psi(sigma / op.theta() - op.b_theta());
    return {lower, upper};
}

double rho_identity_residual(const TransitionOperator& op, const EigenResult& result) {
    const GridFunction& f = result.f;
    const auto& w = f.grid.weights();
    const auto& sp = op.survivor();
    double tail = 0.0;
    for (const auto& zn : op.kernel().z_nodes()) {
        double inner = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            inner += w[i] * sp.psi(result.sigma / zn.z - f.grid.node(i)) * f.values[i];
        tail += zn.w * zn.z * inner;
    }
    const double mass = integrate(f);
    return std::fabs(result.rho * mass - (mass - tail));
}

std::vector<SweepRow> sigma_sweep(const TransitionOperator& op,
                                  const std::vector<double>& sigmas, std::size_t n,
                                  const PowerOptions& opts) {
    std::vector<SweepRow> rows;
    if (sigmas.empty()) return rows;
    std::vector<EigenResult> results;
    results.reserve(sigmas.size());
    for (double sigma : sigmas) results.push_back(power_iterate(op, sigma, n, opts));

    const auto it_max = std::max_element(
        results.begin(), results.end(),
        [](const EigenResult& a, const EigenResult& b) { return a.sigma < b.sigma; });
    const GridFunction& f_ref = it_max->f;

    for (const auto& r : results) {
        const GridFunction ref_here = resample(f_ref, r.f.grid);
        SweepRow row;
        row.sigma = r.sigma;
        row.rho = r.rho;
        row.one_minus_rho = 1.0 - r.rho;
        row.psi_lower = op.survivor().psi((1.0 / op.eta() - 1.0) * r.sigma);
        row.f_diff = l1_distance(r.f, ref_here);
        row.iterations = r.iterations;
        rows.push_back(row);
    }
    return rows;
}

} // namespace adder
