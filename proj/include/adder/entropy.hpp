#pragma once

#include "adder/density2d.hpp"
#include "adder/operator.hpp"

#include <functional>
#include <vector>

namespace adder {

// Entropy generator H. Built-ins are convex (identity is affine);
// tabulated choices must pass a discrete midpoint convexity check.
class HFunction {
public:
    enum class Kind { Identity, AbsoluteDeviation, Quadratic, Tabulated };

    static HFunction identity() { return HFunction(Kind::Identity); }
    static HFunction absolute_deviation() { return HFunction(Kind::AbsoluteDeviation); }
    static HFunction quadratic() { return HFunction(Kind::Quadratic); }
    static HFunction tabulated(std::vector<double> x, std::vector<double> y);

    Kind kind() const { return kind_; }
    bool convex() const { return true; }
    double operator()(double x) const;

private:
    explicit HFunction(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<double> tab_x_, tab_y_;
};

// General relative entropy configuration: the generator, the stationary
// density in (a,s) coordinates, and the floor below which the ratio n/N
// is treated as outside the support.
struct EntropyConfig {
    HFunction h = HFunction::quadratic();
    Density2D stationary;
    double support_floor = 1e-12; // relative to max N
};

// H[n] = int int x N H(n/N) over the stationary support, with x = a+s.
double entropy(const EntropyConfig& cfg, const Density2D& n);

// Largest ratio n/N over the stationary support (domination monitor).
double domination_ratio(const EntropyConfig& cfg, const Density2D& n);

// Jensen-gap dissipation
//   D[n] = int x^2 N(0,x) [ int H(n/N) dnu_x - H(int n/N dnu_x) ] dx,
// nu_x normalized numerically so the convexity sign is exact; the raw
// nu masses are available through nu_x_mass.
double dissipation(const EntropyConfig& cfg, const TransitionOperator& op,
                   const Density2D& n);

// Mass of the measure nu_x(a,z) = B(a) N(a, x/z) / (N(0,x) z^2) da dmu(z);
// equals 1 when the boundary relation holds at x.
double nu_x_mass(const EntropyConfig& cfg, const TransitionOperator& op, double x);

} // namespace adder
