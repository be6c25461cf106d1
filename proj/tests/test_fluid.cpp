#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "iaw/fluid.hpp"
#include "iaw/kdv.hpp"

using namespace iaw;

namespace {
constexpr double kPi = std::numbers::pi;

double max_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}
}  // namespace

TEST_CASE("poisson_solve closed forms") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    const double eps = 0.07;

    SUBCASE("uniform density gives zero potential") {
        CHECK(linf_norm(poisson_solve(constant_field(g, 1.0), eps)) <= 1e-15);
    }
    SUBCASE("single mode reproduces the exact response") {
        const double a = 0.3;
        const double k = 5.0;
        RealField rho(g);
        for (int i = 0; i < g->n; ++i) rho[i] = 1.0 + a * std::cos(k * g->points[i]);
        RealField phi = poisson_solve(rho, eps);
        const double gain = 1.0 / (eps * eps * k * k + eps);
        double err = 0.0;
        for (int i = 0; i < g->n; ++i)
            err = std::max(err, std::abs(phi[i] - a * gain * std::cos(k * g->points[i])));
        CHECK(err <= 1e-12 * a * gain);
    }
    SUBCASE("constant offset maps to m / eps") {
        const double m = 0.02;
        RealField phi = poisson_solve(constant_field(g, 1.0 + m), eps);
        CHECK(linf_norm(lincomb(1.0, phi, -1.0, constant_field(g, m / eps))) <= 1e-13 * (m / eps));
    }
}

TEST_CASE("elliptic constraint of the solved potential") {
    GridPtr g = make_grid(2.0 * kPi, 128);
    const double eps = 0.05;
    RealField rho(g);
    for (int i = 0; i < g->n; ++i)
        rho[i] = 1.0 + 0.1 * std::cos(g->points[i]) + 0.03 * std::sin(4.0 * g->points[i]);
    RealField phi = poisson_solve(rho, eps);
    RealField d2phi = deriv(phi, 2);
    RealField res(g);
    for (int i = 0; i < g->n; ++i)
        res[i] = -eps * eps * d2phi[i] + eps * phi[i] - (rho[i] - 1.0);
    CHECK(l2_norm(res) <= 1e-11);
}

TEST_CASE("ep_rhs vanishes on equilibrium and constant-velocity states") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    SUBCASE("equilibrium") {
        FluidRhs r = ep_rhs(equilibrium_state(g), 0.1);
        CHECK(linf_norm(r.drho) <= 1e-13);
        CHECK(linf_norm(r.du1) <= 1e-13);
        CHECK(linf_norm(r.dtheta) <= 1e-13);
    }
    SUBCASE("constant velocity") {
        FluidState s = equilibrium_state(g);
        s.u1 = constant_field(g, 0.37);
        FluidRhs r = ep_rhs(s, 0.1);
        CHECK(linf_norm(r.drho) <= 1e-13);
        CHECK(linf_norm(r.du1) <= 1e-13);
        CHECK(linf_norm(r.dtheta) <= 1e-13);
    }
}

TEST_CASE("ep_rhs matches the hand linearization for a small density mode") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    const double eps = 0.1, a = 1e-5, k = 3.0;
    FluidState s = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) s.rho[i] = 1.0 + a * std::cos(k * g->points[i]);
    FluidRhs r = ep_rhs(s, eps);

    const double gain = 1.0 / (eps * (eps * eps * k * k + eps));  // Poisson force factor
    double err_rho = 0.0, err_u = 0.0;
    for (int i = 0; i < g->n; ++i) {
        const double x = g->points[i];
        const double lin_rho = -(1.0 / eps) * a * k * std::sin(k * x);
        const double lin_u = a * k * std::sin(k * x) * (1.0 + gain);
        err_rho = std::max(err_rho, std::abs(r.drho[i] - lin_rho));
        err_u = std::max(err_u, std::abs(r.du1[i] - lin_u));
    }
    CHECK(err_rho <= 1e-12 / eps);
    CHECK(err_u <= 20.0 * a * a * k * (1.0 + gain));
    CHECK(linf_norm(r.dtheta) <= 1e-12);
}

TEST_CASE("ep_step keeps the equilibrium exactly") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    FluidState s = equilibrium_state(g);
    FluidState next = ep_step(s, 0.1, 1e-2);
    CHECK(max_diff(next.rho, s.rho) <= 1e-15);
    CHECK(max_diff(next.u1, s.u1) <= 1e-15);
    CHECK(max_diff(next.theta, s.theta) <= 1e-15);
}

TEST_CASE("eigen frequency formula matches a direct ODE integration") {
    // independent oracle: RK4 on dw/dt = i k [(1/eps) I + B] w with
    // B from the linearized equations
    const double eps = 0.1, k = 5.0;
    const double g = 1.0 / (eps * eps * (1.0 + eps * k * k));
    const double mu = std::sqrt(5.0 / 3.0 + g);
    using C = std::complex<double>;
    auto Bmul = [&](const std::array<C, 3>& w) {
        return std::array<C, 3>{(1.0 / eps) * w[0] - w[1],
                                -(1.0 + g) * w[0] + (1.0 / eps) * w[1] - (2.0 / 3.0) * w[2],
                                -w[1] + (1.0 / eps) * w[2]};
    };
    std::array<C, 3> w{1.0, -mu, 1.0};
    const double dt = 2e-6, T = 0.02;
    const int steps = static_cast<int>(T / dt);
    const C ik(0.0, k);
    auto rhs = [&](const std::array<C, 3>& v) {
        auto bv = Bmul(v);
        return std::array<C, 3>{ik * bv[0], ik * bv[1], ik * bv[2]};
    };
    for (int n = 0; n < steps; ++n) {
        auto k1 = rhs(w);
        std::array<C, 3> t2, t3, t4;
        for (int j = 0; j < 3; ++j) t2[j] = w[j] + 0.5 * dt * k1[j];
        auto k2 = rhs(t2);
        for (int j = 0; j < 3; ++j) t3[j] = w[j] + 0.5 * dt * k2[j];
        auto k3 = rhs(t3);
        for (int j = 0; j < 3; ++j) t4[j] = w[j] + dt * k3[j];
        auto k4 = rhs(t4);
        for (int j = 0; j < 3; ++j)
            w[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    // the (1, -mu, 1) eigenvector rotates at omega = k (1/eps + mu)
    const double omega = ep_mode_frequency(k, eps);
    const C expected = std::exp(C(0.0, omega * T));
    CHECK(std::abs(w[0] - expected) <= 1e-7);
    CHECK(std::abs(w[1] - (-mu) * expected) <= 1e-6 * mu);
}

TEST_CASE("stepper reproduces the analytic oscillation frequency") {
    GridPtr grid = make_grid(2.0 * kPi, 64);
    const double eps = 0.1, a = 1e-8;
    const double k = 5.0;
    const double g = 1.0 / (eps * eps * (1.0 + eps * k * k));
    const double mu = std::sqrt(5.0 / 3.0 + g);

    FluidState s = equilibrium_state(grid);
    for (int i = 0; i < grid->n; ++i) {
        const double c = std::cos(k * grid->points[i]);
        s.rho[i] = 1.0 + a * c;
        s.u1[i] = -a * mu * c;
        s.theta[i] = 1.5 + a * c;
    }
    const double T = 0.2, dt = 1e-3;
    FluidTrajectory traj = run_fluid(s, eps, 0.0, TransportCoeffs::constant(), T, dt, 10);

    // phase rate of the k-mode coefficient of rho - 1
    const int mode = 5;  // k = 5 on the 2 pi box
    std::vector<std::complex<double>> coef;
    for (const auto& st : traj.states) {
        RealField r(grid);
        for (int i = 0; i < grid->n; ++i) r[i] = st.rho[i] - 1.0;
        coef.push_back(to_modes(r).coeffs[mode]);
    }
    double acc = 0.0;
    for (size_t i = 1; i < coef.size(); ++i) acc += std::arg(coef[i] / coef[i - 1]);
    const double dt_snap = traj.times[1] - traj.times[0];
    const double omega_num = acc / (dt_snap * (coef.size() - 1));
    const double omega_exact = ep_mode_frequency(k, eps);
    CHECK(std::abs(omega_num - omega_exact) <= 1e-6 * omega_exact);
}

TEST_CASE("exponential split agrees with direct RK4 on the full system") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    const double eps = 0.1, T = 0.1;
    FluidState s0 = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) {
        const double x = g->points[i];
        s0.rho[i] = 1.0 + 0.05 * std::cos(x);
        s0.u1[i] = 0.03 * std::sin(x);
        s0.theta[i] = 1.5 + 0.02 * std::cos(2.0 * x);
    }
    FluidTrajectory split = run_fluid(s0, eps, 0.0, TransportCoeffs::constant(), T, 5e-4, 200);

    // direct classical RK4 on ep_rhs (stability requires the small dt)
    FluidState w = s0;
    const double dt = 2.5e-5;
    const int steps = static_cast<int>(std::round(T / dt));
    auto add = [&](const FluidState& base, const FluidRhs& k, double h) {
        FluidState out = base;
        for (int i = 0; i < g->n; ++i) {
            out.rho[i] = base.rho[i] + h * k.drho[i];
            out.u1[i] = base.u1[i] + h * k.du1[i];
            out.theta[i] = base.theta[i] + h * k.dtheta[i];
        }
        return out;
    };
    for (int n = 0; n < steps; ++n) {
        FluidRhs k1 = ep_rhs(w, eps);
        FluidRhs k2 = ep_rhs(add(w, k1, dt / 2.0), eps);
        FluidRhs k3 = ep_rhs(add(w, k2, dt / 2.0), eps);
        FluidRhs k4 = ep_rhs(add(w, k3, dt), eps);
        for (int i = 0; i < g->n; ++i) {
            w.rho[i] += dt / 6.0 * (k1.drho[i] + 2.0 * k2.drho[i] + 2.0 * k3.drho[i] + k4.drho[i]);
            w.u1[i] += dt / 6.0 * (k1.du1[i] + 2.0 * k2.du1[i] + 2.0 * k3.du1[i] + k4.du1[i]);
            w.theta[i] +=
                dt / 6.0 * (k1.dtheta[i] + 2.0 * k2.dtheta[i] + 2.0 * k3.dtheta[i] + k4.dtheta[i]);
        }
    }
    CHECK(max_diff(split.states.back().rho, w.rho) <= 1e-7);
    CHECK(max_diff(split.states.back().u1, w.u1) <= 1e-7);
    CHECK(max_diff(split.states.back().theta, w.theta) <= 1e-7);
}

TEST_CASE("temporal order of the fluid stepper") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    const double eps = 0.1, T = 0.2;
    FluidState s0 = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) {
        const double x = g->points[i];
        s0.rho[i] = 1.0 + 0.05 * std::cos(x);
        s0.u1[i] = 0.03 * std::sin(x);
        s0.theta[i] = 1.5 + 0.02 * std::cos(2.0 * x);
    }
    auto end_state = [&](double dt) {
        const int ns = plan_steps(T, dt, 1);
        return run_fluid(s0, eps, 0.0, TransportCoeffs::constant(), T, dt, ns).states.back();
    };
    FluidState ref = end_state(T / 2048);
    const double e1 = l2_norm(lincomb(1.0, end_state(T / 32).rho, -1.0, ref.rho));
    const double e2 = l2_norm(lincomb(1.0, end_state(T / 64).rho, -1.0, ref.rho));
    CHECK(std::log2(e1 / e2) >= 3.5);
}

TEST_CASE("nsp_rhs reduces to ep_rhs at zero collisionality") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    FluidState s = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) {
        s.rho[i] = 1.0 + 0.1 * std::cos(g->points[i]);
        s.u1[i] = 0.05 * std::sin(2.0 * g->points[i]);
    }
    FluidRhs a = nsp_rhs(s, 0.1, 0.0, TransportCoeffs::constant());
    FluidRhs b = ep_rhs(s, 0.1);
    CHECK(max_diff(a.du1, b.du1) == 0.0);
    CHECK(max_diff(a.dtheta, b.dtheta) == 0.0);
}

TEST_CASE("viscous contribution on a single velocity mode") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    const double eps = 0.1, epsdelta = 1e-3, a = 0.2, k = 4.0;
    FluidState s = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) s.u1[i] = a * std::sin(k * g->points[i]);
    FluidRhs visc = nsp_rhs(s, eps, epsdelta, TransportCoeffs::constant());
    FluidRhs invisc = ep_rhs(s, eps);
    double err = 0.0;
    for (int i = 0; i < g->n; ++i) {
        const double expected = -(4.0 / 3.0) * epsdelta * a * k * k * std::sin(k * g->points[i]);
        err = std::max(err, std::abs((visc.du1[i] - invisc.du1[i]) - expected));
    }
    CHECK(err <= 1e-12);
}

TEST_CASE("equilibrium trajectory is constant with clean diagnostics") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    FluidTrajectory traj =
        run_fluid(equilibrium_state(g), 0.1, 0.0, TransportCoeffs::constant(), 1.0, 1e-2, 20);
    for (const auto& d : traj.diagnostics) {
        CHECK(std::abs(d.mass_mean) <= 1e-15);
        CHECK(d.poisson_residual_l2 <= 1e-14);
        CHECK(d.min_rho == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(d.min_theta == doctest::Approx(1.5).epsilon(1e-14));
    }
    CHECK(max_diff(traj.states.back().rho, traj.states.front().rho) <= 1e-15);
}

TEST_CASE("mass mean is conserved and the constraint holds along a nonlinear run") {
    GridPtr g = make_grid(2.0 * kPi, 128);
    const double eps = 0.1;
    FluidState s0 = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) {
        const double x = g->points[i];
        s0.rho[i] = 1.0 + 0.08 * std::cos(x) + 0.01;  // nonzero mean offset
        s0.u1[i] = 0.05 * std::sin(x);
        s0.theta[i] = 1.5 + 0.02 * std::cos(2.0 * x);
    }
    FluidTrajectory traj = run_fluid(s0, eps, 0.0, TransportCoeffs::constant(), 1.0, 1e-3, 100);
    const double m0 = traj.diagnostics.front().mass_mean;
    for (const auto& d : traj.diagnostics) {
        CHECK(std::abs(d.mass_mean - m0) <= 1e-10);
        CHECK(d.poisson_residual_l2 <= 1e-11);
    }
}

TEST_CASE("transverse velocities stay identically zero when initialized zero") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    FluidState s0 = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) {
        s0.rho[i] = 1.0 + 0.05 * std::cos(g->points[i]);
        s0.u1[i] = 0.03 * std::sin(g->points[i]);
    }
    s0.u2 = constant_field(g, 0.0);
    s0.u3 = constant_field(g, 0.0);
    FluidTrajectory traj =
        run_fluid(s0, 0.1, 1e-4, TransportCoeffs::constant(), 0.3, 1e-3, 100);
    CHECK(linf_norm(*traj.states.back().u2) == 0.0);
    CHECK(linf_norm(*traj.states.back().u3) == 0.0);
}

TEST_CASE("frame shift is a pure phase when the rest of the dynamics is disabled") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    const double eps = 0.1, T = 0.05;
    FluidState s0 = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) {
        const double x = g->points[i];
        s0.rho[i] = 1.0 + 0.1 * std::cos(3.0 * x);
        s0.u1[i] = 0.2 * std::sin(x);
        s0.theta[i] = 1.5 + 0.05 * std::cos(2.0 * x);
    }
    FluidSolver::Options opts;
    opts.epsilon = eps;
    opts.mode = StepperMode::ShiftOnly;
    FluidSolver solver(g, 1e-3, opts);
    FluidTrajectory traj = solver.run(s0, T, 50);
    const FluidState& end = traj.states.back();
    // the shifted-frame equations advect data by +t/eps under the 1/eps dx term
    double err = 0.0;
    for (int i = 0; i < g->n; ++i) {
        const double x = g->points[i] + T / eps;
        err = std::max(err, std::abs(end.rho[i] - (1.0 + 0.1 * std::cos(3.0 * x))));
        err = std::max(err, std::abs(end.u1[i] - 0.2 * std::sin(x)));
    }
    CHECK(err <= 1e-10);
}

TEST_CASE("positivity violation aborts with diagnostics") {
    GridPtr g = make_grid(2.0 * kPi, 64);
    FluidState s0 = equilibrium_state(g);
    for (int i = 0; i < g->n; ++i) s0.rho[i] = 1.0 + 1.2 * std::cos(g->points[i]);  // rho < 0
    FluidSolver::Options opts;
    opts.epsilon = 0.1;
    FluidSolver solver(g, 1e-3, opts);
    CHECK_THROWS_AS(solver.run(s0, 0.2, 10), std::runtime_error);
}
