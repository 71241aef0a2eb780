#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace adder {

// Uniform 1-D quadrature grid with trapezoid weights.
class Grid1D {
public:
    Grid1D(double s_min, double s_max, std::size_t n);

    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }

    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }
    // Trapezoid weights; they sum to s_max - s_min.
    const std::vector<double>& weights() const { return weights_; }

    bool operator==(const Grid1D& other) const {
        return s_min_ == other.s_min_ && s_max_ == other.s_max_ && n_ == other.n_;
    }

private:
    double s_min_, s_max_, h_;
    std::size_t n_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Builds a uniform grid on [0, a_max_target] whose spacing divides `point`,
// so that `point` falls exactly on a node. Used to keep the division-rate
// support edge on the grid. The upper end moves by at most one spacing step.
Grid1D grid_through_point(double a_max_target, std::size_t n, double point);

// Values sampled on a Grid1D.
struct GridFunction {
    GridFunction(Grid1D g, std::vector<double> v);
    GridFunction(Grid1D g, double fill = 0.0);

    Grid1D grid;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

// Trapezoid value of the integral over the grid.
double integrate(const GridFunction& f);

// Integral of |f(s)| (s^k + s^l) by trapezoid. Requires s_min > 0 when l < 0.
double weighted_norm(const GridFunction& f, double k, double l);

// Linear interpolation inside [s_min, s_max]; zero outside.
double interpolate(const GridFunction& f, double s);

// L1 distance on a common grid.
double l1_distance(const GridFunction& f, const GridFunction& g);

// Resample onto another grid by interpolation (zero outside the source).
GridFunction resample(const GridFunction& f, const Grid1D& target);

// Two-column CSV "s,value" with 17 significant digits.
void write_csv(const GridFunction& f, const std::string& path);
GridFunction read_grid_function_csv(const std::string& path);

} // namespace adder
