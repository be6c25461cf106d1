#include "iaw/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iaw {

GridPtr make_grid(double length, int n) {
    if (!(length > 0.0)) throw std::invalid_argument("make_grid: length must be positive");
    if (n < 8) throw std::invalid_argument("make_grid: n must be >= 8");
    if (n % 2 != 0) throw std::invalid_argument("make_grid: n must be even");

    auto g = std::make_shared<Grid1D>();
    g->length = length;
    g->n = n;
    g->spacing = length / n;
    g->wavenumbers.resize(n);
    g->points.resize(n);
    const double dk = 2.0 * std::numbers::pi / length;
    for (int j = 0; j < n; ++j) {
        const int js = (j <= n / 2) ? j : j - n;
        g->wavenumbers[j] = dk * js;
        g->points[j] = g->spacing * j;
    }
    return g;
}

RealField::RealField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid->n)
        throw std::invalid_argument("RealField: sample count does not match grid");
}

bool all_finite(const RealField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

RealField lincomb(double a, const RealField& f, double b, const RealField& g) {
    if (f.grid.get() != g.grid.get())
        throw std::invalid_argument("lincomb: fields live on different grids");
    RealField out(f.grid);
    for (int i = 0; i < f.size(); ++i) out[i] = a * f[i] + b * g[i];
    return out;
}

RealField pointwise(const RealField& f, const RealField& g) {
    if (f.grid.get() != g.grid.get())
        throw std::invalid_argument("pointwise: fields live on different grids");
    RealField out(f.grid);
    for (int i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
    return out;
}

RealField constant_field(const GridPtr& g, double value) {
    RealField out(g);
    for (double& v : out.values) v = value;
    return out;
}

}  // namespace iaw
