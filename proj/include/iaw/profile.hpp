#ifndef IAW_PROFILE_HPP
#define IAW_PROFILE_HPP

#include "iaw/fluid.hpp"
#include "iaw/hierarchy.hpp"

namespace iaw {

// eps-assembled approximation
//   rho_bar   = 1 + eps rho1 + eps^2 rho2 + eps^3 rho3
//   u1_bar    = U0 + eps U1 + eps^2 U2            (u13 = 0, u2_bar = u3_bar = 0)
//   theta_bar = 3/2 + eps theta1 + eps^2 theta2 + eps^3 theta3
//   phi_bar   = phi0 + eps phi1 + eps^2 phi2      (phi3 = 0)
// and the a-posteriori measurement of its defect in the fluid systems. By
// construction the mass/velocity/temperature residuals scale as eps^3 and
// the Poisson residual as eps^4.

struct ApproxProfile {
    double epsilon = 0.0;
    double time = 0.0;
    RealField rho_bar, u1_bar, theta_bar, phi_bar;
};

/// Assembles the profile; rejects epsilon for which rho_bar <= 0 or
/// theta_bar leaves (4/3, 2) anywhere.
ApproxProfile build_profile(const CorrectionSet& cs, double epsilon);

struct ProfileTrajectory {
    double epsilon = 0.0;
    GridPtr grid;
    std::vector<double> times;
    std::vector<ApproxProfile> profiles;
};

ProfileTrajectory build_profile_trajectory(const HierarchyTrajectory& traj, double epsilon);

struct ResidualNorms {
    double mass = 0.0;
    double velocity = 0.0;
    double temperature = 0.0;
    double poisson = 0.0;
};

/// Plugs the profile into the Euler-Poisson equations; time derivatives by
/// 4th-order differencing of the stored snapshots, spatial terms spectral.
/// Returns the max over interior snapshot times of the spatial L2 norms.
ResidualNorms profile_residual_ep(const ProfileTrajectory& traj);

/// Same defect in the viscous system; differs from the EP residual by the
/// eps*delta-scaled viscous terms evaluated on the profile.
ResidualNorms profile_residual_nsp(const ProfileTrajectory& traj, const TransportCoeffs& coeffs,
                                   double epsdelta);

/// Profile snapshot viewed as a fluid state (u2 = u3 absent).
FluidState profile_as_fluid_state(const ApproxProfile& p);

}  // namespace iaw

#endif
