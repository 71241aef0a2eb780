#include "adder/laplace.hpp"

#include <cmath>
#include <stdexcept>

namespace adder {
namespace {

// L[Phi](u) over the hat lattice; geometric recurrence instead of one exp
// per term.
double laplace_phi(const std::vector<double>& pw, double h, double u) {
    const double r = std::exp(-u * h);
    double e = 1.0;
    double acc = 0.0;
    for (double w : pw) {
        acc += w * e;
        e *= r;
        if (e == 0.0) break;
    }
    return acc;
}

} // namespace

double laplace(const GridFunction& f, double y) {
    if (y < 0.0) throw std::domain_error("laplace: negative rate");
    const auto& w = f.grid.weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += w[i] * std::exp(-y * f.grid.node(i)) * f.values[i];
    return acc;
}

LaplaceProfile laplace_profile(const GridFunction& f, const std::vector<double>& y_grid) {
    LaplaceProfile p;
    p.y_grid = y_grid;
    p.values.reserve(y_grid.size());
    for (double y : y_grid) p.values.push_back(laplace(f, y));
    return p;
}

std::vector<double> default_y_grid() {
    std::vector<double> y{0.0};
    for (int j = -4; j <= 4; ++j) y.push_back(std::pow(2.0, j));
    return y;
}

LaplaceValidation fixed_point_residual_laplace(const GridFunction& f,
                                               const TransitionOperator& op,
                                               const std::vector<double>& y_grid) {
    const double h = f.grid.spacing();
    const std::size_t count = 16 * f.grid.size();
    const std::vector<double> pw = op.phi_hat_weights(h, count);

    LaplaceValidation out;
    out.y_grid = y_grid;
    double pw_sum = 0.0;
    for (double w : pw) pw_sum += w;
    out.phi_tail = std::max(0.0, 1.0 - pw_sum);

    double y_min_pos = std::numeric_limits<double>::infinity();
    for (double y : y_grid)
        if (y > 0.0) y_min_pos = std::min(y_min_pos, y);
    if (std::isfinite(y_min_pos)) {
        const std::size_t n = f.grid.size();
        const double edge_mass =
            f.grid.weights()[n - 1] * std::fabs(f.values[n - 1]);
        out.f_tail_bound = std::exp(-y_min_pos * f.grid.s_max()) * edge_mass;
    }

    for (double y : y_grid) {
        const double lf = laplace(f, y);
        double rhs = 0.0;
        for (const auto& zn : op.kernel().z_nodes())
            rhs += zn.w * zn.z * laplace(f, zn.z * y) * laplace_phi(pw, h, zn.z * y);
        const double r = std::fabs(lf - rhs);
        out.lf.push_back(lf);
        out.residuals.push_back(r);
        out.max_residual = std::max(out.max_residual, r);
    }
    return out;
}

} // namespace adder
