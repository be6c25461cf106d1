#ifndef IAW_GRID_HPP
#define IAW_GRID_HPP

#include <complex>
#include <memory>
#include <vector>

namespace iaw {

/// Uniform periodic grid on [0, L) with the standard DFT wavenumber table
/// k_j = 2*pi*j/L for j = 0..n/2 and k_j = 2*pi*(j-n)/L for j > n/2.
/// The Nyquist slot j = n/2 stores the positive wavenumber.
struct Grid1D {
    double length = 0.0;
    int n = 0;
    double spacing = 0.0;
    std::vector<double> wavenumbers;
    std::vector<double> points;
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Builds a grid. Requires length > 0, n even, n >= 8.
GridPtr make_grid(double length, int n);

/// Grid function with real samples at the grid points.
struct RealField {
    GridPtr grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(GridPtr g) : grid(std::move(g)), values(grid->n, 0.0) {}
    RealField(GridPtr g, std::vector<double> v);

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

/// DFT coefficients of a grid function; conjugate-symmetric whenever it
/// came from a RealField. Convention: unscaled forward sum, inverse
/// carries the 1/n so that to_values(to_modes(f)) == f.
struct ModeCoeffs {
    GridPtr grid;
    std::vector<std::complex<double>> coeffs;

    ModeCoeffs() = default;
    explicit ModeCoeffs(GridPtr g) : grid(std::move(g)), coeffs(grid->n, 0.0) {}

    int size() const { return static_cast<int>(coeffs.size()); }
};

bool all_finite(const RealField& f);

/// out = a*f + b*g (fields must share a grid)
RealField lincomb(double a, const RealField& f, double b, const RealField& g);

/// pointwise product (no dealiasing; see spectral.hpp for the 2/3-rule version)
RealField pointwise(const RealField& f, const RealField& g);

RealField constant_field(const GridPtr& g, double value);

}  // namespace iaw

#endif
