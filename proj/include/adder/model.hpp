#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace adder {

// Self-similar fragmentation measure mu on (0,1): point masses plus an
// optional uniform density part. Mass conservation requires
// int z dmu(z) = 1, and the support must stay inside a compact subset
// of (0,1).
class FragmentationKernel {
public:
    struct Atom {
        double z;
        double w;
    };
    struct UniformDensity {
        double lo;
        double hi;
        double value; // constant density on [lo, hi]
    };
    // Node set used for all z-quadratures: atoms verbatim, the density part
    // as 32-point Gauss-Legendre nodes with density-scaled weights.
    struct ZNode {
        double z;
        double w;
    };

    FragmentationKernel(std::vector<Atom> atoms, std::optional<UniformDensity> density);

    // mu = 2 delta_{1/2}.
    static FragmentationKernel equal_mitosis();
    static FragmentationKernel from_atoms(std::vector<Atom> atoms);
    // Uniform density on [lo, hi], scaled so that int z dmu = 1.
    static FragmentationKernel uniform_density(double lo, double hi);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<UniformDensity>& density() const { return density_; }
    const std::vector<ZNode>& z_nodes() const { return z_nodes_; }

    double theta() const { return theta_; } // inf supp mu
    double eta() const { return eta_; }     // sup supp mu
    double total_mass() const;              // mu([0,1]), the mean number of daughters
    double first_moment() const;            // int z dmu(z)
    bool is_atomic() const { return !density_.has_value(); }

private:
    std::vector<Atom> atoms_;
    std::optional<UniformDensity> density_;
    std::vector<ZNode> z_nodes_;
    double theta_ = 1.0;
    double eta_ = 0.0;
};

// Division rate B(a) with supp B = [b, infinity).
struct DivisionRate {
    enum class Form {
        ShiftedHyperbolic, // c/(1+a) for a >= b
        ConstantAfter,     // c       for a >= b
        PowerLaw,          // c*a^p   for a >= b
        Tabulated,         // piecewise-linear table, constant beyond the last node
    };

    Form form = Form::ShiftedHyperbolic;
    double b = 1.0;
    double c = 2.0;
    double p = 0.0;
    std::vector<double> tab_a;
    std::vector<double> tab_B;

    static DivisionRate shifted_hyperbolic(double c, double b);
    static DivisionRate constant_after(double c, double b);
    static DivisionRate power_law(double c, double p, double b);
    static DivisionRate tabulated(std::vector<double> a, std::vector<double> B);

    double operator()(double a) const;
};

// Survivor function Psi(a) = exp(-int_0^a B) and division density
// Phi = B*Psi. Closed forms where the rate family admits them, cumulative
// trapezoid of the table otherwise.
class SurvivorPair {
public:
    explicit SurvivorPair(DivisionRate rate);

    const DivisionRate& rate() const { return rate_; }
    bool closed_form() const { return closed_form_; }

    double psi(double a) const;
    double phi(double a) const;
    // int_{x1}^{x2} Psi, exact for closed-form families.
    double psi_integral(double x1, double x2) const;
    // int_0^inf Psi when finite, +inf otherwise.
    double psi_total() const;

    // Decay exponent: Psi(a) = O(a^{-k0}). Infinity for super-polynomial decay.
    double k0() const { return k0_; }

    // Least-squares slope of log Psi against log a over the last decade
    // of [1, a_max]; the tail is what hypothesis (decay) constrains.
    double estimate_k0(double a_max = 1e4) const;

    // Division-increment quantile: the a with 1 - Psi(a) = u, u in [0,1).
    double increment_quantile(double u) const;

private:
    DivisionRate rate_;
    bool closed_form_ = true;
    double k0_ = 0.0;
    // tabulated path: exponent E(a) = int_0^a B on the table grid
    std::vector<double> tab_a_;
    std::vector<double> tab_E_;
    double cum_exponent(double a) const;
};

// One-shot evaluations of Psi and Phi for a given rate.
double survivor(const DivisionRate& rate, double a);
double phi_density(const DivisionRate& rate, double a);

double b_theta(const FragmentationKernel& kernel, const DivisionRate& rate);

struct HypothesisCheck {
    std::string name;
    bool pass;
    std::string detail;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    double theta = 0.0;
    double eta = 0.0;
    double k0_estimate = 0.0;
    bool pass() const;
    std::string to_string() const;
};

// Validates the standing hypotheses: mass conservation, compact support of
// mu inside (0,1), supp B = [b, inf), and the survivor-decay estimate.
// Never throws; downstream solvers refuse to run on a failing report.
HypothesisReport check_hypotheses(const FragmentationKernel& kernel, const DivisionRate& rate);

} // namespace adder
