#pragma once

#include "adder/grid.hpp"

#include <string>
#include <vector>

namespace adder {

// Discretized 2-D density on a tensor grid: increment a times either
// birth size s or size x. Values are stored per second-coordinate row,
// contiguous in a.
class Density2D {
public:
    enum class Coords { IncrementBirthsize, IncrementSize };

    Density2D(Coords coords, Grid1D a_grid, Grid1D second_grid, double fill = 0.0);

    Coords coords() const { return coords_; }
    const Grid1D& a_grid() const { return a_grid_; }
    const Grid1D& second_grid() const { return second_grid_; }

    double value(std::size_t ia, std::size_t isec) const {
        return data_[isec * a_grid_.size() + ia];
    }
    double& value(std::size_t ia, std::size_t isec) {
        return data_[isec * a_grid_.size() + ia];
    }
    // row over a for a fixed second coordinate
    double* row(std::size_t isec) { return data_.data() + isec * a_grid_.size(); }
    const double* row(std::size_t isec) const { return data_.data() + isec * a_grid_.size(); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // bilinear interpolation, zero outside the tensor grid
    double interp(double a, double sec) const;

    double total_integral() const;
    // int int w(a,sec) * density, with w supplied per node
    template <class W>
    double weighted_integral(W&& w) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < second_grid_.size(); ++j) {
            const double wj = second_grid_.weights()[j];
            const double* r = row(j);
            double inner = 0.0;
            for (std::size_t i = 0; i < a_grid_.size(); ++i)
                inner += a_grid_.weights()[i] *
                         w(a_grid_.node(i), second_grid_.node(j)) * r[i];
            acc += wj * inner;
        }
        return acc;
    }

    void scale(double factor);

    // The divisor applied by the last normalization, if any.
    double normalization_constant() const { return norm_constant_; }
    void set_normalization_constant(double z) { norm_constant_ = z; }

private:
    Coords coords_;
    Grid1D a_grid_;
    Grid1D second_grid_;
    std::vector<double> data_;
    double norm_constant_ = 1.0;
};

// Long-form CSV "a,second_coord,value" plus a JSON sidecar describing the
// coordinate system, grids and normalization constant.
void write_csv(const Density2D& d, const std::string& csv_path,
               const std::string& json_path);

} // namespace adder
