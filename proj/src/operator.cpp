#include "adder/operator.hpp"

#include "kernels/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace adder {

TransitionOperator::TransitionOperator(FragmentationKernel kernel, DivisionRate rate)
    : kernel_(std::move(kernel)), survivor_(std::move(rate)) {
    report_ = check_hypotheses(kernel_, survivor_.rate());
    if (!report_.pass())
        throw std::invalid_argument("TransitionOperator: hypotheses fail\n" +
                                    report_.to_string());
    b_theta_ = adder::b_theta(kernel_, survivor_.rate());
}

std::vector<double> TransitionOperator::phi_hat_weights(double h, std::size_t count) const {
    std::vector<double> w(count, 0.0);
    if (count == 0) return w;
    // w[0] = 1 - S(0,h)/h, w[j] = (S((j-1)h, jh) - S(jh, (j+1)h))/h,
    // with S the exact integral of Psi; only cells overlapping
    // [b - h, inf) can be nonzero.
    const double b = survivor_.rate().b;
    std::size_t j_start = 0;
    if (b > h) j_start = static_cast<std::size_t>(std::floor(b / h - 1.0));
    double prev = (j_start == 0) ? 0.0
                                 : survivor_.psi_integral(h * static_cast<double>(j_start - 1),
                                                          h * static_cast<double>(j_start));
    for (std::size_t j = j_start; j < count; ++j) {
        const double cur = survivor_.psi_integral(h * static_cast<double>(j),
                                                  h * static_cast<double>(j + 1));
        w[j] = (j == 0) ? 1.0 - cur / h : (prev - cur) / h;
        prev = cur;
    }
    return w;
}

GridFunction TransitionOperator::apply(const GridFunction& f) const {
    const Grid1D& g = f.grid;
    const std::size_t n = g.size();
    const double h = g.spacing();
    const double s_min = g.s_min();
    if (s_min < 0.0)
        throw std::invalid_argument("TransitionOperator::apply: grid must start at s >= 0");

    const auto& zs = kernel_.z_nodes();
    double z_min = 1.0;
    for (const auto& zn : zs) z_min = std::min(z_min, zn.z);

    // lattice size: covers u = s_max/z_min
    const double p_max = (g.s_max() / z_min - s_min) / h;
    const std::size_t m_count = static_cast<std::size_t>(std::floor(p_max)) + 3;

    const std::vector<double> pw = phi_hat_weights(h, m_count);

    std::vector<double> frev(n);
    for (std::size_t i = 0; i < n; ++i) frev[i] = f.values[n - 1 - i];

    // lattice correlation: corr[m] = sum_j pw[j] * f[m - j]
    std::vector<double> corr(m_count, 0.0);
    for (std::size_t m = 0; m < m_count; ++m) {
        const std::size_t j0 = (m >= n) ? m - n + 1 : 0;
        const std::size_t len = m - j0 + 1;
        corr[m] = kern::dot(pw.data() + j0, frev.data() + (n - 1 - m + j0), len);
    }

    const double f_lo = f.values.front();
    const double f_hi = f.values.back();

    GridFunction out(g, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = g.node(k);
        double acc = 0.0;
        for (const auto& zn : zs) {
            const double p = (s / zn.z - s_min) / h;
            if (p < 0.0) continue;
            const std::size_t i0 = static_cast<std::size_t>(p);
            if (i0 + 1 >= m_count)
                throw std::logic_error("TransitionOperator::apply: lattice too short");
            const double alpha = p - static_cast<double>(i0);
            double q = corr[i0] + alpha * (corr[i0 + 1] - corr[i0]);
            if (alpha > 0.0) {
                // strict zero outside [s_min, s_max]: remove the half-hat
                // overhang cells the lattice interpolant would add
                if (i0 >= n - 1) {
                    const std::size_t j_hi = i0 - (n - 1);
                    if (j_hi < m_count) q -= pw[j_hi] * (1.0 - alpha) * f_hi;
                }
                if (i0 + 1 < m_count) q -= pw[i0 + 1] * alpha * f_lo;
            }
            acc += zn.w * q;
        }
        out.values[k] = acc;
    }
    return out;
}

double weighted_gain(const TransitionOperator& op, const GridFunction& f, double l) {
    const double denom = weighted_norm(f, 0.0, l);
    if (denom == 0.0) throw std::domain_error("weighted_gain: zero input function");
    const GridFunction tf = op.apply(f);
    return weighted_norm(tf, 0.0, l) / denom;
}

} // namespace adder
