#include "adder/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace adder {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// 4-point Gauss-Legendre on [x1,x2].
template <class F>
double gl4(const F& f, double x1, double x2) {
    static const double gx[2] = {0.3399810435848562648, 0.8611363115940525752};
    static const double gw[2] = {0.6521451548625461426, 0.3478548451374538574};
    const double c = 0.5 * (x1 + x2), r = 0.5 * (x2 - x1);
    double acc = 0.0;
    for (int k = 0; k < 2; ++k)
        acc += gw[k] * (f(c - r * gx[k]) + f(c + r * gx[k]));
    return acc * r;
}

} // namespace

FragmentationKernel::FragmentationKernel(std::vector<Atom> atoms,
                                         std::optional<UniformDensity> density)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
    if (atoms_.empty() && !density_)
        throw std::invalid_argument("FragmentationKernel: empty measure");
    for (const auto& a : atoms_) {
        if (!(a.z > 0.0) || !std::isfinite(a.z))
            throw std::invalid_argument("FragmentationKernel: atom location must be positive");
        if (!(a.w > 0.0) || !std::isfinite(a.w))
            throw std::invalid_argument("FragmentationKernel: atom weight must be positive");
        theta_ = std::min(theta_, a.z);
        eta_ = std::max(eta_, a.z);
    }
    if (density_) {
        if (!(density_->lo < density_->hi))
            throw std::invalid_argument("FragmentationKernel: density needs lo < hi");
        if (!(density_->value > 0.0))
            throw std::invalid_argument("FragmentationKernel: density value must be positive");
        theta_ = std::min(theta_, density_->lo);
        eta_ = std::max(eta_, density_->hi);
    }
    z_nodes_.reserve(atoms_.size() + (density_ ? 32 : 0));
    for (const auto& a : atoms_) z_nodes_.push_back({a.z, a.w});
    if (density_) {
        std::vector<double> gx, gw;
        gauss_legendre(32, gx, gw);
        const double c = 0.5 * (density_->lo + density_->hi);
        const double r = 0.5 * (density_->hi - density_->lo);
        for (int i = 0; i < 32; ++i)
            z_nodes_.push_back({c + r * gx[i], r * gw[i] * density_->value});
    }
}

FragmentationKernel FragmentationKernel::equal_mitosis() {
    return FragmentationKernel({{0.5, 2.0}}, std::nullopt);
}

FragmentationKernel FragmentationKernel::from_atoms(std::vector<Atom> atoms) {
    return FragmentationKernel(std::move(atoms), std::nullopt);
}

FragmentationKernel FragmentationKernel::uniform_density(double lo, double hi) {
    // int z * v dz over [lo,hi] = 1  =>  v = 2/(hi^2 - lo^2)
    const double v = 2.0 / (hi * hi - lo * lo);
    return FragmentationKernel({}, UniformDensity{lo, hi, v});
}

double FragmentationKernel::total_mass() const {
    double m = 0.0;
    for (const auto& n : z_nodes_) m += n.w;
    return m;
}

double FragmentationKernel::first_moment() const {
    double m = 0.0;
    for (const auto& n : z_nodes_) m += n.w * n.z;
    return m;
}

DivisionRate DivisionRate::shifted_hyperbolic(double c, double b) {
    DivisionRate r;
    r.form = Form::ShiftedHyperbolic;
    r.c = c;
    r.b = b;
    return r;
}

DivisionRate DivisionRate::constant_after(double c, double b) {
    DivisionRate r;
    r.form = Form::ConstantAfter;
    r.c = c;
    r.b = b;
    return r;
}

DivisionRate DivisionRate::power_law(double c, double p, double b) {
    DivisionRate r;
    r.form = Form::PowerLaw;
    r.c = c;
    r.p = p;
    r.b = b;
    return r;
}

DivisionRate DivisionRate::tabulated(std::vector<double> a, std::vector<double> B) {
    if (a.size() != B.size() || a.size() < 2)
        throw std::invalid_argument("DivisionRate: table needs at least two rows");
    for (std::size_t i = 1; i < a.size(); ++i)
        if (!(a[i] > a[i - 1]))
            throw std::invalid_argument("DivisionRate: table abscissae must increase");
    DivisionRate r;
    r.form = Form::Tabulated;
    r.b = a.front();
    r.tab_a = std::move(a);
    r.tab_B = std::move(B);
    return r;
}

double DivisionRate::operator()(double a) const {
    if (a < b) return 0.0;
    switch (form) {
        case Form::ShiftedHyperbolic:
            return c / (1.0 + a);
        case Form::ConstantAfter:
            return c;
        case Form::PowerLaw:
            return c * std::pow(a, p);
        case Form::Tabulated: {
            if (a >= tab_a.back()) return tab_B.back();
            const auto it = std::upper_bound(tab_a.begin(), tab_a.end(), a);
            const std::size_t i = static_cast<std::size_t>(it - tab_a.begin()) - 1;
            const double t = (a - tab_a[i]) / (tab_a[i + 1] - tab_a[i]);
            return tab_B[i] + t * (tab_B[i + 1] - tab_B[i]);
        }
    }
    return 0.0;
}

SurvivorPair::SurvivorPair(DivisionRate rate) : rate_(std::move(rate)) {
    switch (rate_.form) {
        case DivisionRate::Form::ShiftedHyperbolic:
            if (!(rate_.c > 0.0))
                throw std::invalid_argument("SurvivorPair: need c > 0");
            k0_ = rate_.c;
            break;
        case DivisionRate::Form::ConstantAfter:
            if (!(rate_.c > 0.0))
                throw std::invalid_argument("SurvivorPair: need c > 0");
            k0_ = kInf;
            break;
        case DivisionRate::Form::PowerLaw:
            if (!(rate_.c > 0.0) || rate_.p <= -1.0)
                throw std::invalid_argument("SurvivorPair: need c > 0 and p > -1");
            k0_ = rate_.p > -1.0 ? kInf : 0.0;
            if (rate_.p < 0.0 && rate_.b <= 0.0)
                throw std::invalid_argument("SurvivorPair: power law with p < 0 needs b > 0");
            break;
        case DivisionRate::Form::Tabulated: {
            closed_form_ = false;
            tab_a_ = rate_.tab_a;
            tab_E_.assign(tab_a_.size(), 0.0);
            for (std::size_t i = 1; i < tab_a_.size(); ++i)
                tab_E_[i] = tab_E_[i - 1] + 0.5 * (rate_.tab_B[i] + rate_.tab_B[i - 1]) *
                                                (tab_a_[i] - tab_a_[i - 1]);
            k0_ = rate_.tab_B.back() > 0.0 ? kInf : estimate_k0();
            break;
        }
    }
}

double SurvivorPair::cum_exponent(double a) const {
    const double b = rate_.b;
    if (a <= b) return 0.0;
    switch (rate_.form) {
        case DivisionRate::Form::ShiftedHyperbolic:
            return rate_.c * (std::log1p(a) - std::log1p(b));
        case DivisionRate::Form::ConstantAfter:
            return rate_.c * (a - b);
        case DivisionRate::Form::PowerLaw:
            return rate_.c * (std::pow(a, rate_.p + 1.0) - std::pow(b, rate_.p + 1.0)) /
                   (rate_.p + 1.0);
        case DivisionRate::Form::Tabulated: {
            if (a >= tab_a_.back())
                return tab_E_.back() + rate_.tab_B.back() * (a - tab_a_.back());
            const auto it = std::upper_bound(tab_a_.begin(), tab_a_.end(), a);
            const std::size_t i = static_cast<std::size_t>(it - tab_a_.begin()) - 1;
            const double t = (a - tab_a_[i]) / (tab_a_[i + 1] - tab_a_[i]);
            return tab_E_[i] + t * (tab_E_[i + 1] - tab_E_[i]);
        }
    }
    return 0.0;
}

double SurvivorPair::psi(double a) const {
    if (a < 0.0) throw std::domain_error("survivor: negative increment");
    if (a <= rate_.b) return 1.0;
    if (rate_.form == DivisionRate::Form::ShiftedHyperbolic)
        return std::pow((1.0 + rate_.b) / (1.0 + a), rate_.c);
    return std::exp(-cum_exponent(a));
}

double SurvivorPair::phi(double a) const { return rate_(a) * psi(a); }

double SurvivorPair::psi_integral(double x1, double x2) const {
    if (x1 < 0.0 || x2 < x1) throw std::domain_error("psi_integral: bad interval");
    const double b = rate_.b;
    double acc = 0.0;
    if (x1 < b) {
        const double hi = std::min(x2, b);
        acc += hi - x1; // Psi == 1 below the support edge
        x1 = hi;
    }
    if (x1 >= x2) return acc;
    switch (rate_.form) {
        case DivisionRate::Form::ShiftedHyperbolic: {
            const double c = rate_.c;
            const double base = std::pow(1.0 + b, c);
            if (c == 1.0)
                return acc + (1.0 + b) * std::log((1.0 + x2) / (1.0 + x1));
            return acc + base *
                             (std::pow(1.0 + x1, 1.0 - c) - std::pow(1.0 + x2, 1.0 - c)) /
                             (c - 1.0);
        }
        case DivisionRate::Form::ConstantAfter:
            return acc + (std::exp(-rate_.c * (x1 - b)) - std::exp(-rate_.c * (x2 - b))) /
                             rate_.c;
        default: {
            // smooth integrand; composite GL4
            const auto f = [this](double a) { return psi(a); };
            const int cells = std::max<int>(1, static_cast<int>(std::ceil((x2 - x1) / 0.05)));
            const int nc = std::min(cells, 100000);
            double s = 0.0;
            for (int i = 0; i < nc; ++i) {
                const double a0 = x1 + (x2 - x1) * i / nc;
                const double a1 = x1 + (x2 - x1) * (i + 1) / nc;
                s += gl4(f, a0, a1);
            }
            return acc + s;
        }
    }
}

double SurvivorPair::psi_total() const {
    const double b = rate_.b;
    switch (rate_.form) {
        case DivisionRate::Form::ShiftedHyperbolic:
            return rate_.c > 1.0 ? b + (1.0 + b) / (rate_.c - 1.0) : kInf;
        case DivisionRate::Form::ConstantAfter:
            return b + 1.0 / rate_.c;
        case DivisionRate::Form::PowerLaw: {
            // step until the tail is negligible
            double a = b, total = b;
            double width = std::max(1.0, b);
            while (psi(a) > 1e-14 && a < 1e9) {
                total += psi_integral(a, a + width);
                a += width;
                width *= 1.5;
            }
            return total;
        }
        case DivisionRate::Form::Tabulated: {
            const double B_end = rate_.tab_B.back();
            if (B_end <= 0.0) return kInf;
            const double a_end = tab_a_.back();
            return psi_integral(0.0, a_end) + psi(a_end) / B_end;
        }
    }
    return kInf;
}

double SurvivorPair::estimate_k0(double a_max) const {
    // slope of log Psi vs log a over the last decade of [1, a_max]
    const double lo = a_max / 10.0, hi = a_max;
    const int m = 50;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < m; ++i) {
        const double a = lo * std::pow(hi / lo, static_cast<double>(i) / (m - 1));
        const double ps = psi(a);
        if (ps <= 1e-300) continue;
        const double x = std::log(a), y = std::log(ps);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return kInf; // Psi already underflowed: faster than any power
    const double denom = cnt * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return -(cnt * sxy - sx * sy) / denom;
}

double SurvivorPair::increment_quantile(double u) const {
    if (u < 0.0 || u >= 1.0) throw std::domain_error("increment_quantile: u outside [0,1)");
    const double b = rate_.b;
    if (u == 0.0) return b;
    switch (rate_.form) {
        case DivisionRate::Form::ShiftedHyperbolic:
            return (1.0 + b) * std::pow(1.0 - u, -1.0 / rate_.c) - 1.0;
        case DivisionRate::Form::ConstantAfter:
            return b - std::log1p(-u) / rate_.c;
        case DivisionRate::Form::PowerLaw: {
            const double q = rate_.p + 1.0;
            return std::pow(std::pow(b, q) - q * std::log1p(-u) / rate_.c, 1.0 / q);
        }
        case DivisionRate::Form::Tabulated: {
            const double target = 1.0 - u; // Psi(a) = target
            double lo = b, hi = std::max(2.0 * b + 1.0, 1.0);
            while (psi(hi) > target) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e12) return hi;
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (psi(mid) > target)
                    lo = mid;
                else
                    hi = mid;
                if (hi - lo < 1e-13 * (1.0 + hi)) break;
            }
            return 0.5 * (lo + hi);
        }
    }
    return b;
}

double survivor(const DivisionRate& rate, double a) { return SurvivorPair(rate).psi(a); }

double phi_density(const DivisionRate& rate, double a) { return SurvivorPair(rate).phi(a); }

double b_theta(const FragmentationKernel& kernel, const DivisionRate& rate) {
    const double th = kernel.theta();
    if (th >= 1.0) throw std::domain_error("b_theta: theta must be below 1");
    return th * rate.b / (1.0 - th);
}

bool HypothesisReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string HypothesisReport::to_string() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "[pass] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
    return os.str();
}

HypothesisReport check_hypotheses(const FragmentationKernel& kernel, const DivisionRate& rate) {
    HypothesisReport rep;
    rep.theta = kernel.theta();
    rep.eta = kernel.eta();

    {
        const double m1 = kernel.first_moment();
        const double tol = kernel.is_atomic() ? 1e-10 : 1e-8;
        std::ostringstream os;
        os << "int z dmu = " << m1 << " (tolerance " << tol << ")";
        rep.checks.push_back({"mass conservation", std::fabs(m1 - 1.0) <= tol, os.str()});
    }
    {
        const bool ok = kernel.theta() > 0.0 && kernel.eta() < 1.0 &&
                        kernel.theta() <= kernel.eta() && kernel.total_mass() > 0.0 &&
                        std::isfinite(kernel.total_mass());
        std::ostringstream os;
        os << "supp mu in [" << kernel.theta() << ", " << kernel.eta()
           << "], mass " << kernel.total_mass();
        rep.checks.push_back({"compact support inside (0,1)", ok, os.str()});
    }
    {
        bool ok = rate.b >= 0.0 && std::isfinite(rate.b);
        // B vanishes below b and carries mass just above it
        if (ok && rate.b > 0.0) ok = rate(0.5 * rate.b) == 0.0;
        double above = 0.0;
        for (int i = 1; i <= 16 && ok; ++i) above += rate(rate.b + 0.1 * i);
        if (ok) ok = above > 0.0;
        std::ostringstream os;
        os << "supp B = [" << rate.b << ", inf)";
        rep.checks.push_back({"division-rate support", ok, os.str()});
    }
    {
        bool ok = true;
        std::ostringstream os;
        try {
            SurvivorPair sp(rate);
            const double est = sp.estimate_k0();
            rep.k0_estimate = std::isfinite(sp.k0()) ? sp.k0() : est;
            ok = (std::isfinite(sp.k0()) ? sp.k0() : est) > 0.05;
            os << "k0 ";
            if (std::isfinite(sp.k0()))
                os << "= " << sp.k0();
            else
                os << "estimate " << est << " (super-polynomial decay)";
        } catch (const std::exception& e) {
            ok = false;
            os << "survivor construction failed: " << e.what();
        }
        rep.checks.push_back({"survivor decay", ok, os.str()});
    }
    return rep;
}

} // namespace adder
