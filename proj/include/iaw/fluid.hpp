#ifndef IAW_FLUID_HPP
#define IAW_FLUID_HPP

#include <functional>
#include <optional>

#include "iaw/grid.hpp"
#include "iaw/spectral.hpp"

namespace iaw {

// Rescaled, frame-shifted Euler-Poisson system around (rho,u1,theta) = (1,0,3/2):
//
//   dt rho   = (1/eps) dx rho   - dx(rho u1)
//   dt u1    = (1/eps) dx u1    - u1 dx u1 - 2/3 (theta/rho) dx rho - 2/3 dx theta - (1/eps) dx phi
//   dt theta = (1/eps) dx theta - u1 dx theta - 2/3 theta dx u1
//   -eps^2 dx^2 phi + eps phi = rho - 1        (constraint, never time-stepped)
//
// plus eps*delta-scaled viscous/conductive/heating terms in the NSP variant.
// The stepper diagonalizes the constant-coefficient linearization per mode
// (frame shift, acoustics and the Poisson response are one exact complex
// phase per eigenchannel) and treats only the genuinely nonlinear remainder
// explicitly, which removes the eps-dependent CFL restriction.

/// Smooth positive transport coefficients on the admissible temperature range.
struct TransportCoeffs {
    std::function<double(double)> mu;
    std::function<double(double)> kappa;
    std::string name;

    static TransportCoeffs constant();    ///< mu = kappa = 1
    static TransportCoeffs sqrt_theta();  ///< mu = kappa = sqrt(theta)
    static TransportCoeffs by_name(const std::string& name);
};

/// Exact per-mode solve of -eps^2 phi'' + eps phi = rho - 1;
/// phi_hat_k = (rho-1)_hat_k / (eps^2 k^2 + eps), the k = 0 mode carries
/// mean(rho-1)/eps.
RealField poisson_solve(const RealField& rho, double epsilon);

struct FluidState {
    double time = 0.0;
    RealField rho, u1, theta, phi;
    std::optional<RealField> u2, u3;
};

struct FluidRhs {
    RealField drho, du1, dtheta;
    std::optional<RealField> du2, du3;
};

/// Right-hand side with phi refreshed from the Poisson constraint.
FluidRhs ep_rhs(const FluidState& s, double epsilon);
FluidRhs nsp_rhs(const FluidState& s, double epsilon, double epsdelta,
                 const TransportCoeffs& coeffs);

/// Same evaluation but using the phi stored in the state (residual oracles
/// plug in approximate profiles whose phi is not the Poisson solve of rho).
FluidRhs fluid_rhs_with_phi(const FluidState& s, double epsilon, double epsdelta,
                            const TransportCoeffs* coeffs);

enum class StepperMode {
    Full,        ///< production
    LinearOnly,  ///< exact linear propagator, nonlinear remainder disabled
    ShiftOnly    ///< frame-shift phase only (acoustic block also disabled)
};

struct FluidDiagnostics {
    double time = 0.0;
    double mass_mean = 0.0;            ///< mean(rho - 1)
    double poisson_residual_l2 = 0.0;  ///< elliptic constraint defect of stored phi
    double min_rho = 0.0, min_theta = 0.0;
    Norms rho_n{}, u1_n{}, theta_n{}, phi_n{};
};

struct FluidTrajectory {
    GridPtr grid;
    double dt = 0.0;
    int stride = 1;
    std::vector<double> times;
    std::vector<FluidState> states;
    std::vector<FluidDiagnostics> diagnostics;
};

class FluidSolver {
  public:
    struct Options {
        double epsilon = 0.1;
        double epsdelta = 0.0;
        TransportCoeffs coeffs = TransportCoeffs::constant();
        StepperMode mode = StepperMode::Full;
        bool evolve_transverse = false;  ///< step u2, u3 channels as well
    };

    FluidSolver(GridPtr grid, double dt, Options opts);

    /// One step; throws on non-finite values or positivity violation.
    FluidState step(const FluidState& s);

    /// Integrates [0, T]; snapshots (with diagnostics) every `stride` steps.
    FluidTrajectory run(const FluidState& init, double T, int stride);

    double dt() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

FluidState ep_step(const FluidState& s, double epsilon, double dt);

FluidTrajectory run_fluid(const FluidState& init, double epsilon, double epsdelta,
                          const TransportCoeffs& coeffs, double T, double dt, int stride);

/// Equilibrium state (1, 0, 3/2, 0) on the grid.
FluidState equilibrium_state(const GridPtr& grid);

/// Analytic oscillation frequency of the +acoustic eigenchannel at mode k:
/// omega = k (1/eps + sqrt(5/3 + g)), g = 1/(eps^2 (1 + eps k^2)).
double ep_mode_frequency(double k, double epsilon);

}  // namespace iaw

#endif
