#ifndef IAW_HIERARCHY_HPP
#define IAW_HIERARCHY_HPP

#include <map>
#include <string>

#include "iaw/grid.hpp"
#include "iaw/kdv.hpp"

namespace iaw {

// Correction cascade behind the leading KdV profile. Writing U_i for u_{1i}:
//
//   order 1:  u10 = rho1 = theta1 = phi0 = U0          (identities)
//   order 2:  rho2   = U1 - 1/2 U0'' + 1/4 U0^2
//             phi1   = U1 + 1/2 U0'' + 1/4 U0^2
//             theta2 = U1 - 1/2 U0'' + 1/12 U0^2
//             dt U1 + 1/2 U1''' + 3/2 (U0 U1)' = N1(U0)
//   order 3:  dt U2 + (U0 U2)' = N2(U0,U1,rho2,theta2) (U3 = phi3 = 0),
//             rho3 / phi2 from closed-form antiderivatives, theta3 from a
//             numerically integrated zero-mean antiderivative.
//
// Time derivatives inside the sources are always eliminated through the
// evolution equations before discretization, so every source is a pure
// spatial operator.

struct CorrectionSet {
    double time = 0.0;
    RealField U0, U1, U2;  // u10, u11, u12; u13 == 0 by convention
    RealField rho1, rho2, rho3;
    RealField theta1, theta2, theta3;
    RealField phi0, phi1, phi2;  // phi3 == 0 by convention
    /// zero-mean-gauge diagnostics: mean of the theta3 antiderivative integrand
    double theta3_integrand_mean = 0.0;
};

struct FirstOrder {
    RealField U0, rho1, theta1;
};

/// Order-1 identities: three copies of phi0.
FirstOrder first_order(const RealField& phi0);

/// N1(U0) with dt U0 eliminated via the KdV equation; purely spatial,
/// products dealiased.
RealField n1_source(const RealField& U0);

/// N2 = -U1 U1' - rho2' + 1/3 U0 U0' - 2/3 theta2'.
/// (The transcription of the O(eps^2) velocity equation carries a
/// -rho1 rho1' term from expanding (dx rho / rho) theta; see NOTES in the
/// implementation.)
RealField n2_source(const RealField& U0, const RealField& U1, const RealField& rho2,
                    const RealField& theta2);

struct Level2 {
    RealField rho2, phi1, theta2;
};

Level2 level2_algebraic(const RealField& U0, const RealField& U1);

struct Level3 {
    RealField rho3, phi2, theta3;
    double theta3_integrand_mean = 0.0;
};

/// Closed-form rho3 and phi2; theta3 via antideriv_zero_mean of the fully
/// spatialized integrand (its mean is reported; a large value flags a
/// box-truncation artifact).
Level3 recover_level3(const RealField& U0, const RealField& U1, const RealField& U2);

CorrectionSet assemble_correction_set(double time, const RealField& U0, const RealField& U1,
                                      const RealField& U2);

struct HierarchyTrajectory {
    GridPtr grid;
    double dt = 0.0;
    int stride = 1;
    std::vector<double> times;
    std::vector<CorrectionSet> sets;
};

/// Co-evolves (U0, U1, U2) with one stepper: dispersion blocks exact per
/// mode, the U2 block has no linear part and therefore reduces to classical
/// RK4. Assembles a CorrectionSet at every stored snapshot.
HierarchyTrajectory solve_hierarchy(const RealField& phi0_init, double T, double dt, int stride,
                                    const RealField* U1_init = nullptr,
                                    const RealField* U2_init = nullptr);

/// U1 time series co-evolved against the stored KdV trajectory (same grid,
/// step and stride; the U0 block repeats the identical update arithmetic).
std::vector<RealField> solve_U1(const KdVTrajectory& kdv, const RealField& U1_init);

/// U2 time series for an existing hierarchy trajectory.
std::vector<RealField> solve_U2(const HierarchyTrajectory& traj, const RealField& U2_init);

/// dt U + (U0 U)' = forcing with time-independent U0 and forcing; classical
/// RK4 (the zero-linear-part path of the shared stepper). Diagnostic helper.
RealField transport_constant_coeff(const RealField& U0, const RealField& forcing,
                                   const RealField& init, double T, double dt);

/// A-posteriori residual of every equation in the cascade, evaluated with
/// 4th-order time differencing of the stored snapshots. Keys: mass1..mass3,
/// velocity1..velocity4, temperature1..temperature3, poisson1..poisson3.
/// Values: max over interior snapshot times of the spatial L2 norm.
std::map<std::string, double> hierarchy_residuals(const HierarchyTrajectory& traj);

}  // namespace iaw

#endif
