#include "iaw/kdv.hpp"

#include <cmath>
#include <stdexcept>

#include "iaw/spectral.hpp"

namespace iaw {

ComplexVec kdv_dispersion_lambda(const Grid1D& g) {
    ComplexVec lam(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double k = g.wavenumbers[j];
        lam[j] = std::complex<double>(0.0, 0.5 * k * k * k);
    }
    lam[g.n / 2] = 0.0;
    return lam;
}

// Conservative form keeps the k = 0 coefficient exactly zero, so the mean of
// phi0 never drifts under stepping.
void kdv_quadratic_rhs(const GridPtr& grid, const ComplexVec& phi_hat, ComplexVec& out) {
    ModeCoeffs m(grid);
    m.coeffs = phi_hat;
    dealias_inplace(m);
    RealField phi = to_values(m);
    RealField sq = pointwise(phi, phi);
    ModeCoeffs sq_hat = to_modes(sq);
    dealias_inplace(sq_hat);
    const Grid1D& g = *grid;
    for (int j = 0; j < g.n; ++j)
        out[j] = std::complex<double>(0.0, -0.75 * g.wavenumbers[j]) * sq_hat.coeffs[j];
    out[g.n / 2] = 0.0;
}

RealField kdv_rhs(const RealField& phi0) {
    RealField disp = deriv(phi0, 3);
    RealField sq = dealiased_product(phi0, phi0);
    RealField dsq = deriv(sq, 1);
    RealField out(phi0.grid);
    for (int i = 0; i < out.size(); ++i) out[i] = -0.5 * disp[i] - 0.75 * dsq[i];
    return out;
}

RealField soliton_exact(const GridPtr& grid, double k, double t) {
    if (!(k > 0.0)) throw std::invalid_argument("soliton_exact: k must be positive");
    const Grid1D& g = *grid;
    const double x0 = 0.5 * g.length;
    const double amp = 4.0 * k * k;
    const double speed = 2.0 * k * k;
    RealField f(grid);
    for (int i = 0; i < g.n; ++i) {
        double xi = g.points[i] - x0 - speed * t;
        xi -= g.length * std::round(xi / g.length);  // nearest periodic image
        const double c = std::cosh(k * xi);
        f[i] = amp / (c * c);
    }
    return f;
}

double soliton_boundary_defect(const GridPtr& grid, double k) {
    RealField f = soliton_exact(grid, k, 0.0);
    const double amp = 4.0 * k * k;
    return std::max(std::abs(f[0]), std::abs(f[f.size() - 1])) / amp;
}

KdvInvariants kdv_invariants(const RealField& phi0) {
    RealField dx = deriv(phi0, 1);
    double mass = 0.0, mom = 0.0, ham = 0.0;
    for (int i = 0; i < phi0.size(); ++i) {
        const double v = phi0[i];
        mass += v;
        mom += v * v;
        ham += 0.25 * v * v * v - 0.25 * dx[i] * dx[i];
    }
    const double h = phi0.grid->spacing;
    return {mass * h, mom * h, ham * h};
}

int plan_steps(double T, double dt_request, int stride) {
    if (!(T > 0.0) || !(dt_request > 0.0) || stride < 1)
        throw std::invalid_argument("plan_steps: T, dt, stride must be positive");
    int nsteps = static_cast<int>(std::ceil(T / dt_request - 1e-9));
    nsteps = ((nsteps + stride - 1) / stride) * stride;
    return nsteps;
}

KdVSolver::KdVSolver(GridPtr grid, double dt)
    : grid_(grid), stepper_({kdv_dispersion_lambda(*grid)}, dt) {}

KdVState KdVSolver::step(const KdVState& s) {
    StackedState y(1);
    y[0] = to_modes(s.phi0).coeffs;
    auto N = [this](const StackedState& in, StackedState& out) {
        kdv_quadratic_rhs(grid_, in[0], out[0]);
    };
    stepper_.step(y, N);
    ModeCoeffs m(grid_);
    m.coeffs = std::move(y[0]);
    KdVState next{s.time + stepper_.dt(), to_values(m)};
    if (!all_finite(next.phi0))
        throw std::runtime_error("kdv_step: non-finite values at t = " + std::to_string(next.time));
    return next;
}

KdVTrajectory KdVSolver::solve(const RealField& init, double T, int stride) {
    const int nsteps = plan_steps(T, stepper_.dt(), stride);
    const double dt = T / nsteps;
    DiagEtdrk4 stepper({kdv_dispersion_lambda(*grid_)}, dt);
    auto N = [this](const StackedState& in, StackedState& out) {
        kdv_quadratic_rhs(grid_, in[0], out[0]);
    };

    StackedState y(1);
    {
        ModeCoeffs m = to_modes(init);
        dealias_inplace(m);
        y[0] = m.coeffs;
    }
    KdVTrajectory traj;
    traj.grid = grid_;
    traj.dt = dt;
    traj.stride = stride;
    auto snapshot = [&](int istep) {
        ModeCoeffs m(grid_);
        m.coeffs = y[0];
        RealField f = to_values(m);
        if (!all_finite(f))
            throw std::runtime_error("kdv_solve: non-finite values at step " + std::to_string(istep));
        traj.times.push_back(istep * dt);
        traj.phi0.push_back(std::move(f));
    };
    snapshot(0);
    for (int istep = 1; istep <= nsteps; ++istep) {
        stepper.step(y, N);
        if (istep % stride == 0) snapshot(istep);
    }
    return traj;
}

KdVState kdv_step(const KdVState& s, double dt) {
    KdVSolver solver(s.phi0.grid, dt);
    return solver.step(s);
}

}  // namespace iaw
