#include "adder/grid.hpp"

#include "kernels/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adder {

Grid1D::Grid1D(double s_min, double s_max, std::size_t n)
    : s_min_(s_min), s_max_(s_max), n_(n) {
    if (!(s_max > s_min)) throw std::invalid_argument("Grid1D: s_max must exceed s_min");
    if (n < 2) throw std::invalid_argument("Grid1D: need at least two nodes");
    h_ = (s_max - s_min) / static_cast<double>(n - 1);
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        nodes_[i] = s_min + (s_max - s_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    nodes_.back() = s_max;
    weights_.assign(n, h_);
    weights_.front() = 0.5 * h_;
    weights_.back() = 0.5 * h_;
}

Grid1D grid_through_point(double a_max_target, std::size_t n, double point) {
    if (point <= 0.0 || point >= a_max_target)
        return Grid1D(0.0, a_max_target, n);
    const double h_raw = a_max_target / static_cast<double>(n - 1);
    const double k = std::max(1.0, std::round(point / h_raw));
    const double h = point / k;
    return Grid1D(0.0, h * static_cast<double>(n - 1), n);
}

GridFunction::GridFunction(Grid1D g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("GridFunction: value count does not match grid");
}

GridFunction::GridFunction(Grid1D g, double fill)
    : grid(std::move(g)), values(grid.size(), fill) {}

double integrate(const GridFunction& f) {
    return kern::dot(f.grid.weights().data(), f.values.data(), f.size());
}

double weighted_norm(const GridFunction& f, double k, double l) {
    if (l < 0.0 && f.grid.s_min() <= 0.0)
        throw std::domain_error("weighted_norm: weight s^l singular at 0 on this grid");
    const auto& w = f.grid.weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double s = f.grid.node(i);
        acc += w[i] * std::fabs(f.values[i]) * (std::pow(s, k) + std::pow(s, l));
    }
    return acc;
}

double interpolate(const GridFunction& f, double s) {
    const Grid1D& g = f.grid;
    if (s < g.s_min() || s > g.s_max()) return 0.0;
    const double p = (s - g.s_min()) / g.spacing();
    std::size_t i = static_cast<std::size_t>(p);
    if (i >= g.size() - 1) return f.values.back();
    const double a = p - static_cast<double>(i);
    return f.values[i] + a * (f.values[i + 1] - f.values[i]);
}

double l1_distance(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid))
        throw std::invalid_argument("l1_distance: grids differ");
    const auto& w = f.grid.weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += w[i] * std::fabs(f.values[i] - g.values[i]);
    return acc;
}

GridFunction resample(const GridFunction& f, const Grid1D& target) {
    GridFunction out(target);
    for (std::size_t i = 0; i < target.size(); ++i)
        out.values[i] = interpolate(f, target.node(i));
    return out;
}

void write_csv(const GridFunction& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(fp, "s,value\n");
    for (std::size_t i = 0; i < f.size(); ++i)
        std::fprintf(fp, "%.17g,%.17g\n", f.grid.node(i), f.values[i]);
    std::fclose(fp);
}

GridFunction read_grid_function_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<double> s, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::runtime_error("malformed CSV row: " + line);
        s.push_back(std::stod(a));
        v.push_back(std::stod(b));
    }
    if (s.size() < 2) throw std::runtime_error("CSV has fewer than two rows: " + path);
    Grid1D g(s.front(), s.back(), s.size());
    return GridFunction(g, std::move(v));
}

} // namespace adder
