#include "adder/density2d.hpp"

#include "kernels/kernels.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace adder {

Density2D::Density2D(Coords coords, Grid1D a_grid, Grid1D second_grid, double fill)
    : coords_(coords),
      a_grid_(std::move(a_grid)),
      second_grid_(std::move(second_grid)),
      data_(a_grid_.size() * second_grid_.size(), fill) {}

double Density2D::interp(double a, double sec) const {
    if (a < a_grid_.s_min() || a > a_grid_.s_max()) return 0.0;
    if (sec < second_grid_.s_min() || sec > second_grid_.s_max()) return 0.0;
    const double pa = (a - a_grid_.s_min()) / a_grid_.spacing();
    const double ps = (sec - second_grid_.s_min()) / second_grid_.spacing();
    std::size_t ia = std::min(static_cast<std::size_t>(pa), a_grid_.size() - 2);
    std::size_t is = std::min(static_cast<std::size_t>(ps), second_grid_.size() - 2);
    const double ta = pa - static_cast<double>(ia);
    const double ts = ps - static_cast<double>(is);
    const double v00 = value(ia, is), v10 = value(ia + 1, is);
    const double v01 = value(ia, is + 1), v11 = value(ia + 1, is + 1);
    return (1.0 - ts) * (v00 + ta * (v10 - v00)) + ts * (v01 + ta * (v11 - v01));
}

double Density2D::total_integral() const {
    const auto& wa = a_grid_.weights();
    double acc = 0.0;
    for (std::size_t j = 0; j < second_grid_.size(); ++j)
        acc += second_grid_.weights()[j] * kern::dot(wa.data(), row(j), a_grid_.size());
    return acc;
}

void Density2D::scale(double factor) {
    kern::scale(data_.data(), factor, data_.size());
}

void write_csv(const Density2D& d, const std::string& csv_path,
               const std::string& json_path) {
    std::FILE* fp = std::fopen(csv_path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + csv_path);
    const char* sec_name =
        d.coords() == Density2D::Coords::IncrementBirthsize ? "s" : "x";
    std::fprintf(fp, "a,%s,value\n", sec_name);
    for (std::size_t j = 0; j < d.second_grid().size(); ++j)
        for (std::size_t i = 0; i < d.a_grid().size(); ++i)
            std::fprintf(fp, "%.17g,%.17g,%.17g\n", d.a_grid().node(i),
                         d.second_grid().node(j), d.value(i, j));
    std::fclose(fp);

    nlohmann::json meta;
    meta["coordinates"] =
        d.coords() == Density2D::Coords::IncrementBirthsize ? "increment-birthsize"
                                                            : "increment-size";
    meta["a_grid"] = {{"min", d.a_grid().s_min()},
                      {"max", d.a_grid().s_max()},
                      {"n", d.a_grid().size()}};
    meta["second_grid"] = {{"min", d.second_grid().s_min()},
                           {"max", d.second_grid().s_max()},
                           {"n", d.second_grid().size()}};
    meta["normalization_constant"] = d.normalization_constant();
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + json_path);
    out << meta.dump(2) << "\n";
}

} // namespace adder
