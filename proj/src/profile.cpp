#include "iaw/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace iaw {

namespace {

RealField assemble(const RealField& c0, const RealField* c1, const RealField* c2,
                   const RealField* c3, double epsilon) {
    RealField out = c0;
    const double e1 = epsilon, e2 = epsilon * epsilon, e3 = e2 * epsilon;
    for (int i = 0; i < out.size(); ++i) {
        if (c1) out[i] += e1 * (*c1)[i];
        if (c2) out[i] += e2 * (*c2)[i];
        if (c3) out[i] += e3 * (*c3)[i];
    }
    return out;
}

RealField fd_time(const std::vector<ApproxProfile>& p, RealField ApproxProfile::*field, size_t i,
                  double dt_snap) {
    const RealField& f0 = p[i - 2].*field;
    RealField out(f0.grid);
    const double c = 1.0 / (12.0 * dt_snap);
    for (int j = 0; j < out.size(); ++j)
        out[j] = c * ((p[i - 2].*field)[j] - 8.0 * (p[i - 1].*field)[j] +
                      8.0 * (p[i + 1].*field)[j] - (p[i + 2].*field)[j]);
    return out;
}

ResidualNorms residual_impl(const ProfileTrajectory& traj, const TransportCoeffs* coeffs,
                            double epsdelta) {
    const size_t m = traj.profiles.size();
    if (m < 5) throw std::invalid_argument("profile residual: need at least 5 snapshots");
    const double dt_snap = traj.times[1] - traj.times[0];
    const double eps = traj.epsilon;

    ResidualNorms out;
    for (size_t i = 2; i + 2 < m; ++i) {
        const ApproxProfile& p = traj.profiles[i];
        FluidState s = profile_as_fluid_state(p);
        FluidRhs rhs = fluid_rhs_with_phi(s, eps, epsdelta, coeffs);

        RealField dt_rho = fd_time(traj.profiles, &ApproxProfile::rho_bar, i, dt_snap);
        RealField dt_u1 = fd_time(traj.profiles, &ApproxProfile::u1_bar, i, dt_snap);
        RealField dt_th = fd_time(traj.profiles, &ApproxProfile::theta_bar, i, dt_snap);

        RealField r_mass(traj.grid), r_vel(traj.grid), r_temp(traj.grid), r_poi(traj.grid);
        RealField d2phi = deriv(p.phi_bar, 2);
        for (int j = 0; j < r_mass.size(); ++j) {
            r_mass[j] = dt_rho[j] - rhs.drho[j];
            r_vel[j] = dt_u1[j] - rhs.du1[j];
            r_temp[j] = dt_th[j] - rhs.dtheta[j];
            r_poi[j] = -eps * eps * d2phi[j] + eps * p.phi_bar[j] - (p.rho_bar[j] - 1.0);
        }
        out.mass = std::max(out.mass, l2_norm(r_mass));
        out.velocity = std::max(out.velocity, l2_norm(r_vel));
        out.temperature = std::max(out.temperature, l2_norm(r_temp));
        out.poisson = std::max(out.poisson, l2_norm(r_poi));
    }
    return out;
}

}  // namespace

ApproxProfile build_profile(const CorrectionSet& cs, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_profile: epsilon must be positive");
    ApproxProfile p;
    p.epsilon = epsilon;
    p.time = cs.time;

    RealField one = constant_field(cs.U0.grid, 1.0);
    RealField base_theta = constant_field(cs.U0.grid, 1.5);
    p.rho_bar = assemble(one, &cs.rho1, &cs.rho2, &cs.rho3, epsilon);
    p.u1_bar = assemble(cs.U0, &cs.U1, &cs.U2, nullptr, epsilon);
    p.theta_bar = assemble(base_theta, &cs.theta1, &cs.theta2, &cs.theta3, epsilon);
    p.phi_bar = assemble(cs.phi0, &cs.phi1, &cs.phi2, nullptr, epsilon);

    for (int i = 0; i < p.rho_bar.size(); ++i) {
        if (!(p.rho_bar[i] > 0.0))
            throw std::invalid_argument("build_profile: rho_bar <= 0 at this epsilon");
        if (!(p.theta_bar[i] > 4.0 / 3.0 && p.theta_bar[i] < 2.0))
            throw std::invalid_argument("build_profile: theta_bar outside (4/3, 2)");
    }
    return p;
}

ProfileTrajectory build_profile_trajectory(const HierarchyTrajectory& traj, double epsilon) {
    ProfileTrajectory out;
    out.epsilon = epsilon;
    out.grid = traj.grid;
    out.times = traj.times;
    out.profiles.reserve(traj.sets.size());
    for (const auto& cs : traj.sets) out.profiles.push_back(build_profile(cs, epsilon));
    return out;
}

FluidState profile_as_fluid_state(const ApproxProfile& p) {
    FluidState s;
    s.time = p.time;
    s.rho = p.rho_bar;
    s.u1 = p.u1_bar;
    s.theta = p.theta_bar;
    s.phi = p.phi_bar;
    return s;
}

ResidualNorms profile_residual_ep(const ProfileTrajectory& traj) {
    return residual_impl(traj, nullptr, 0.0);
}

ResidualNorms profile_residual_nsp(const ProfileTrajectory& traj, const TransportCoeffs& coeffs,
                                   double epsdelta) {
    if (epsdelta < 0.0) throw std::invalid_argument("profile_residual_nsp: epsdelta must be >= 0");
    if (epsdelta == 0.0) return residual_impl(traj, nullptr, 0.0);
    return residual_impl(traj, &coeffs, epsdelta);
}

}  // namespace iaw
