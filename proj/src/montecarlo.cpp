#include "adder/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adder {
namespace {

// trapezoid CDF of a nonnegative grid function, normalized; piecewise
// quadratic between nodes
struct GridCdf {
    explicit GridCdf(const GridFunction& f) : f_(f), cum_(f.size(), 0.0) {
        const auto& g = f.grid;
        for (std::size_t i = 1; i < f.size(); ++i) {
            const double fi = std::max(f.values[i - 1], 0.0);
            const double fj = std::max(f.values[i], 0.0);
            cum_[i] = cum_[i - 1] + 0.5 * g.spacing() * (fi + fj);
        }
        total_ = cum_.back();
        if (!(total_ > 0.0)) throw std::domain_error("GridCdf: zero density");
    }

    double operator()(double s) const {
        const auto& g = f_.grid;
        if (s <= g.s_min()) return 0.0;
        if (s >= g.s_max()) return 1.0;
        const double p = (s - g.s_min()) / g.spacing();
        const std::size_t i = std::min(static_cast<std::size_t>(p), f_.size() - 2);
        const double t = p - static_cast<double>(i);
        const double fi = std::max(f_.values[i], 0.0);
        const double fj = std::max(f_.values[i + 1], 0.0);
        const double partial =
            g.spacing() * (fi * t + 0.5 * (fj - fi) * t * t);
        return (cum_[i] + partial) / total_;
    }

    // inverse by cell search plus the quadratic within the cell
    double inverse(double u) const {
        const auto& g = f_.grid;
        const double target = u * total_;
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
        if (it == cum_.begin()) return g.s_min();
        if (it == cum_.end()) return g.s_max();
        const std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
        const double q = (target - cum_[i]) / g.spacing();
        const double fi = std::max(f_.values[i], 0.0);
        const double fj = std::max(f_.values[i + 1], 0.0);
        const double slope = fj - fi;
        double t;
        if (std::fabs(slope) < 1e-14 * (fi + fj + 1e-300)) {
            t = fi > 0.0 ? q / fi : 0.0;
        } else {
            const double disc = fi * fi + 2.0 * slope * q;
            t = (std::sqrt(std::max(disc, 0.0)) - fi) / slope;
        }
        return g.node(i) + std::clamp(t, 0.0, 1.0) * g.spacing();
    }

    const GridFunction& f_;
    std::vector<double> cum_;
    double total_;
};

} // namespace

ChainSampler::ChainSampler(FragmentationKernel kernel, DivisionRate rate,
                           std::uint64_t seed, std::size_t burn_in, std::size_t n_samples)
    : kernel_(std::move(kernel)),
      survivor_(std::move(rate)),
      seed_(seed),
      burn_in_(burn_in),
      n_samples_(n_samples) {
    // offspring-fraction proposal z dmu(z): atoms with probability w_i z_i
    for (const auto& a : kernel_.atoms()) {
        atom_total_ += a.w * a.z;
        atom_cum_.push_back(atom_total_);
    }
    double density_mass = 0.0;
    if (kernel_.density()) {
        const auto& d = *kernel_.density();
        const std::size_t n = 4096;
        density_z_.resize(n + 1);
        density_cum_.resize(n + 1, 0.0);
        const double h = (d.hi - d.lo) / static_cast<double>(n);
        for (std::size_t i = 0; i <= n; ++i) density_z_[i] = d.lo + h * i;
        for (std::size_t i = 1; i <= n; ++i) {
            const double z0 = density_z_[i - 1], z1 = density_z_[i];
            density_cum_[i] =
                density_cum_[i - 1] + 0.5 * h * (z0 * d.value + z1 * d.value);
        }
        density_mass = density_cum_.back();
    }
    const double total = atom_total_ + density_mass;
    if (std::fabs(total - 1.0) > 1e-6)
        throw std::invalid_argument(
            "ChainSampler: z dmu(z) is not a probability measure; mass conservation fails");
}

double ChainSampler::draw_fraction(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    if (!atom_cum_.empty() && (u < atom_total_ || density_cum_.empty())) {
        const auto it = std::upper_bound(atom_cum_.begin(), atom_cum_.end(), u);
        const std::size_t i =
            std::min(static_cast<std::size_t>(it - atom_cum_.begin()),
                     kernel_.atoms().size() - 1);
        return kernel_.atoms()[i].z;
    }
    const double target = u - atom_total_;
    const auto it = std::upper_bound(density_cum_.begin(), density_cum_.end(), target);
    std::size_t i = static_cast<std::size_t>(it - density_cum_.begin());
    i = std::min(std::max<std::size_t>(i, 1), density_cum_.size() - 1) - 1;
    const double span = density_cum_[i + 1] - density_cum_[i];
    const double t = span > 0.0 ? (target - density_cum_[i]) / span : 0.0;
    return density_z_[i] + t * (density_z_[i + 1] - density_z_[i]);
}

double ChainSampler::draw_increment(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return survivor_.increment_quantile(unif(rng));
}

double ChainSampler::transition(double s, std::mt19937_64& rng) const {
    const double delta = draw_increment(rng);
    const double z = draw_fraction(rng);
    return z * (s + delta);
}

std::vector<double> ChainSampler::sample_chain(double s0) const {
    if (!(s0 > 0.0)) throw std::domain_error("sample_chain: initial birth size must be positive");
    std::mt19937_64 rng(seed_);
    double s = s0;
    for (std::size_t k = 0; k < burn_in_; ++k) s = transition(s, rng);
    std::vector<double> out;
    out.reserve(n_samples_);
    for (std::size_t k = 0; k < n_samples_; ++k) {
        s = transition(s, rng);
        out.push_back(s);
    }
    return out;
}

struct GridDensitySampler::Impl {
    GridFunction f;
    GridCdf cdf;
    explicit Impl(const GridFunction& fin) : f(fin), cdf(f) {}
};

GridDensitySampler::GridDensitySampler(const GridFunction& f) : impl_(new Impl(f)) {}
GridDensitySampler::~GridDensitySampler() { delete impl_; }

double GridDensitySampler::draw(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return impl_->cdf.inverse(unif(rng));
}

double ks_distance(std::vector<double> samples, const GridFunction& f) {
    if (samples.empty()) throw std::domain_error("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const GridCdf cdf(f);
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / n - F));
        ks = std::max(ks, std::fabs(static_cast<double>(i) / n - F));
    }
    return ks;
}

ChiSquareTest one_step_chi_square(const ChainSampler& sampler, const GridFunction& f,
                                  const TransitionOperator& op, std::size_t n_samples,
                                  std::uint64_t seed, std::size_t n_bins) {
    const GridFunction tf = op.apply(f);
    const GridCdf tf_cdf(tf);
    const Grid1D& g = f.grid;

    // bin edges on the grid span
    std::vector<double> edges(n_bins + 1);
    for (std::size_t k = 0; k <= n_bins; ++k)
        edges[k] = g.s_min() + (g.s_max() - g.s_min()) * static_cast<double>(k) /
                                   static_cast<double>(n_bins);

    std::mt19937_64 rng(seed);
    const GridDensitySampler f_sampler(f);
    std::vector<double> counts(n_bins, 0.0);
    std::size_t used = 0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double s0 = f_sampler.draw(rng);
        const double s1 = sampler.transition(s0, rng);
        if (s1 < g.s_min() || s1 >= g.s_max()) continue; // condition on the window
        const std::size_t bin = std::min(
            static_cast<std::size_t>((s1 - g.s_min()) / (edges[1] - edges[0])), n_bins - 1);
        counts[bin] += 1.0;
        ++used;
    }
    if (used == 0) throw std::domain_error("one_step_chi_square: all samples left the window");

    std::vector<double> probs(n_bins);
    const double total_prob = tf_cdf(g.s_max()) - tf_cdf(g.s_min());
    for (std::size_t k = 0; k < n_bins; ++k)
        probs[k] = (tf_cdf(edges[k + 1]) - tf_cdf(edges[k])) / total_prob;

    // merge adjacent bins until every expected count is at least 5
    std::vector<double> mc, mp;
    double cc = 0.0, cp = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        cc += counts[k];
        cp += probs[k];
        if (cp * static_cast<double>(used) >= 5.0) {
            mc.push_back(cc);
            mp.push_back(cp);
            cc = cp = 0.0;
        }
    }
    if (cp > 0.0 || cc > 0.0) {
        if (!mc.empty() && cp * static_cast<double>(used) < 5.0) {
            mc.back() += cc;
            mp.back() += cp;
        } else {
            mc.push_back(cc);
            mp.push_back(cp);
        }
    }

    ChiSquareTest out;
    out.used_samples = used;
    for (std::size_t k = 0; k < mc.size(); ++k) {
        const double expected = mp[k] * static_cast<double>(used);
        if (expected <= 0.0) continue;
        const double d = mc[k] - expected;
        out.statistic += d * d / expected;
    }
    out.dof = static_cast<int>(mc.size()) - 1;
    out.p_value = out.dof > 0 ? gamma_q(0.5 * out.dof, 0.5 * out.statistic) : 1.0;
    return out;
}

// series / continued-fraction evaluation of the regularized incomplete gamma
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, Q = 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Q(a,x) by Lentz continued fraction
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

} // namespace adder
