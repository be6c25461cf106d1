#include "iaw/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iaw/expstep.hpp"
#include "iaw/kdv.hpp"

namespace iaw {

namespace {

RealField tp(const RealField& a, const RealField& b) {
    ModeCoeffs m = to_modes(pointwise(a, b));
    dealias_inplace(m);
    return to_values(m);
}

RealField truncated(const RealField& f) {
    ModeCoeffs m = to_modes(f);
    dealias_inplace(m);
    return to_values(m);
}

struct ModeStructure {
    double g, mu, beta;
};

ModeStructure mode_structure(double k, double epsilon) {
    const double g = 1.0 / (epsilon * epsilon * (1.0 + epsilon * k * k));
    return {g, std::sqrt(5.0 / 3.0 + g), 1.5 * (1.0 + g)};
}

/// eps*delta * (4/(3 rho)) dx(mu(theta) dx u1) and friends
RealField viscous_flux_div(const RealField& coeff_of_theta, const RealField& dfield,
                           const RealField& rho, double epsdelta, double prefactor) {
    RealField flux = pointwise(coeff_of_theta, dfield);
    RealField div = deriv(truncated(flux), 1);
    RealField out(rho.grid);
    for (int i = 0; i < out.size(); ++i) out[i] = epsdelta * prefactor * div[i] / rho[i];
    return out;
}

RealField apply_fn(const RealField& theta, const std::function<double(double)>& fn) {
    RealField out(theta.grid);
    for (int i = 0; i < out.size(); ++i) out[i] = fn(theta[i]);
    return out;
}

}  // namespace

TransportCoeffs TransportCoeffs::constant() {
    return {[](double) { return 1.0; }, [](double) { return 1.0; }, "constant"};
}

TransportCoeffs TransportCoeffs::sqrt_theta() {
    return {[](double th) { return std::sqrt(th); }, [](double th) { return std::sqrt(th); },
            "sqrt_theta"};
}

TransportCoeffs TransportCoeffs::by_name(const std::string& name) {
    if (name == "constant") return constant();
    if (name == "sqrt_theta") return sqrt_theta();
    throw std::invalid_argument("unknown transport coefficient choice: " + name);
}

RealField poisson_solve(const RealField& rho, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("poisson_solve: epsilon must be positive");
    RealField r(rho.grid);
    for (int i = 0; i < r.size(); ++i) r[i] = rho[i] - 1.0;
    ModeCoeffs m = to_modes(r);
    const Grid1D& g = *rho.grid;
    for (int j = 0; j < g.n; ++j) {
        const double k = g.wavenumbers[j];
        m.coeffs[j] /= epsilon * epsilon * k * k + epsilon;
    }
    return to_values(m);
}

double ep_mode_frequency(double k, double epsilon) {
    const ModeStructure ms = mode_structure(k, epsilon);
    return k * (1.0 / epsilon + ms.mu);
}

FluidState equilibrium_state(const GridPtr& grid) {
    FluidState s;
    s.time = 0.0;
    s.rho = constant_field(grid, 1.0);
    s.u1 = constant_field(grid, 0.0);
    s.theta = constant_field(grid, 1.5);
    s.phi = constant_field(grid, 0.0);
    return s;
}

FluidRhs fluid_rhs_with_phi(const FluidState& s, double epsilon, double epsdelta,
                            const TransportCoeffs* coeffs) {
    const GridPtr& g = s.rho.grid;
    for (int i = 0; i < s.rho.size(); ++i) {
        if (!(s.rho[i] > 0.0) || !(s.theta[i] > 0.0))
            throw std::runtime_error("fluid rhs: rho or theta left the admissible range");
    }
    const double inv_eps = 1.0 / epsilon;

    RealField drho_x = deriv(s.rho, 1);
    RealField du_x = deriv(s.u1, 1);
    RealField dth_x = deriv(s.theta, 1);
    RealField dphi_x = deriv(s.phi, 1);

    FluidRhs out;
    {
        RealField flux = tp(s.rho, s.u1);
        RealField dflux = deriv(flux, 1);
        out.drho = RealField(g);
        for (int i = 0; i < out.drho.size(); ++i) out.drho[i] = inv_eps * drho_x[i] - dflux[i];
    }
    {
        RealField adv = tp(s.u1, du_x);
        RealField pres(g);  // (theta/rho) dx rho, evaluated pointwise
        for (int i = 0; i < pres.size(); ++i) pres[i] = s.theta[i] / s.rho[i] * drho_x[i];
        pres = truncated(pres);
        out.du1 = RealField(g);
        for (int i = 0; i < out.du1.size(); ++i)
            out.du1[i] = inv_eps * du_x[i] - adv[i] - (2.0 / 3.0) * pres[i] -
                         (2.0 / 3.0) * dth_x[i] - inv_eps * dphi_x[i];
    }
    {
        RealField adv = tp(s.u1, dth_x);
        RealField comp = tp(s.theta, du_x);
        out.dtheta = RealField(g);
        for (int i = 0; i < out.dtheta.size(); ++i)
            out.dtheta[i] = inv_eps * dth_x[i] - adv[i] - (2.0 / 3.0) * comp[i];
    }

    if (epsdelta > 0.0 && coeffs) {
        RealField mu_th = apply_fn(s.theta, coeffs->mu);
        RealField kappa_th = apply_fn(s.theta, coeffs->kappa);
        RealField visc_u = viscous_flux_div(mu_th, du_x, s.rho, epsdelta, 4.0 / 3.0);
        RealField cond = viscous_flux_div(kappa_th, dth_x, s.rho, epsdelta, 1.0);
        for (int i = 0; i < out.du1.size(); ++i) {
            out.du1[i] += visc_u[i];
            const double heating =
                epsdelta * (4.0 / 3.0) * mu_th[i] * du_x[i] * du_x[i] / s.rho[i];
            out.dtheta[i] += cond[i] + heating;
        }
        if (s.u2 && s.u3) {
            RealField du2_x = deriv(*s.u2, 1);
            RealField du3_x = deriv(*s.u3, 1);
            for (int i = 0; i < out.dtheta.size(); ++i)
                out.dtheta[i] += epsdelta * mu_th[i] *
                                 (du2_x[i] * du2_x[i] + du3_x[i] * du3_x[i]) / s.rho[i];
        }
    }

    // transverse channels: dt ui = (1/eps) dx ui - u1 dx ui (+ viscous)
    auto transverse = [&](const RealField& ui) {
        RealField dui_x = deriv(ui, 1);
        RealField adv = tp(s.u1, dui_x);
        RealField d(g);
        for (int i = 0; i < d.size(); ++i) d[i] = inv_eps * dui_x[i] - adv[i];
        if (epsdelta > 0.0 && coeffs) {
            RealField mu_th = apply_fn(s.theta, coeffs->mu);
            RealField visc = viscous_flux_div(mu_th, dui_x, s.rho, epsdelta, 1.0);
            for (int i = 0; i < d.size(); ++i) d[i] += visc[i];
        }
        return d;
    };
    if (s.u2) out.du2 = transverse(*s.u2);
    if (s.u3) out.du3 = transverse(*s.u3);
    return out;
}

FluidRhs ep_rhs(const FluidState& s, double epsilon) {
    FluidState with_phi = s;
    with_phi.phi = poisson_solve(s.rho, epsilon);
    return fluid_rhs_with_phi(with_phi, epsilon, 0.0, nullptr);
}

FluidRhs nsp_rhs(const FluidState& s, double epsilon, double epsdelta,
                 const TransportCoeffs& coeffs) {
    if (epsdelta < 0.0) throw std::invalid_argument("nsp_rhs: epsdelta must be >= 0");
    FluidState with_phi = s;
    with_phi.phi = poisson_solve(s.rho, epsilon);
    return fluid_rhs_with_phi(with_phi, epsilon, epsdelta, &coeffs);
}

struct FluidSolver::Impl {
    GridPtr grid;
    Options opts;
    std::vector<ModeStructure> ms;
    DiagEtdrk4 stepper;
    int nfluid = 3;

    Impl(GridPtr g, double dt, Options o)
        : grid(std::move(g)), opts(std::move(o)), ms(build_ms()), stepper(build_lambdas(), dt) {}

    std::vector<ModeStructure> build_ms() {
        std::vector<ModeStructure> v;
        v.reserve(grid->n);
        for (int j = 0; j < grid->n; ++j)
            v.push_back(mode_structure(grid->wavenumbers[j], opts.epsilon));
        return v;
    }

    std::vector<ComplexVec> build_lambdas() {
        const int n = grid->n;
        const double inv_eps = 1.0 / opts.epsilon;
        ComplexVec l0(n), lp(n), lm(n);
        for (int j = 0; j < n; ++j) {
            const double k = grid->wavenumbers[j];
            const double mu = (opts.mode == StepperMode::ShiftOnly) ? 0.0 : ms[j].mu;
            l0[j] = std::complex<double>(0.0, k * inv_eps);
            lp[j] = std::complex<double>(0.0, k * (inv_eps + mu));
            lm[j] = std::complex<double>(0.0, k * (inv_eps - mu));
        }
        std::vector<ComplexVec> lambdas{l0, lp, lm};
        if (opts.evolve_transverse) {
            ComplexVec lt(n);
            for (int j = 0; j < n; ++j)
                lt[j] = std::complex<double>(0.0, grid->wavenumbers[j] * inv_eps);
            lambdas.push_back(lt);
            lambdas.push_back(lt);
        }
        return lambdas;
    }

    bool plain_channels() const { return opts.mode == StepperMode::ShiftOnly; }

    // (r,v,s) mode coefficients -> eigen channels
    void to_eigen(const ComplexVec& r, const ComplexVec& v, const ComplexVec& s,
                  StackedState& c) const {
        for (int j = 0; j < grid->n; ++j) {
            if (plain_channels()) {
                c[0][j] = r[j];
                c[1][j] = v[j];
                c[2][j] = s[j];
                continue;
            }
            const double mu = ms[j].mu, beta = ms[j].beta;
            const std::complex<double> c0 = (r[j] - s[j]) / (1.0 + beta);
            const std::complex<double> d = r[j] - c0;
            c[0][j] = c0;
            c[1][j] = 0.5 * (d - v[j] / mu);
            c[2][j] = 0.5 * (d + v[j] / mu);
        }
    }

    void from_eigen(const StackedState& c, ComplexVec& r, ComplexVec& v, ComplexVec& s) const {
        for (int j = 0; j < grid->n; ++j) {
            if (plain_channels()) {
                r[j] = c[0][j];
                v[j] = c[1][j];
                s[j] = c[2][j];
                continue;
            }
            const double mu = ms[j].mu, beta = ms[j].beta;
            r[j] = c[0][j] + c[1][j] + c[2][j];
            v[j] = mu * (c[2][j] - c[1][j]);
            s[j] = -beta * c[0][j] + c[1][j] + c[2][j];
        }
    }

    void nonlinear(const StackedState& y, StackedState& out) {
        for (auto& comp : out) std::fill(comp.begin(), comp.end(), std::complex<double>(0.0));
        if (opts.mode != StepperMode::Full) return;

        const int n = grid->n;
        ComplexVec rh(n), vh(n), sh(n);
        from_eigen(y, rh, vh, sh);

        auto field_of = [&](const ComplexVec& coeffs) {
            ModeCoeffs m(grid);
            m.coeffs = coeffs;
            return to_values(m);
        };
        auto dfield_of = [&](const ComplexVec& coeffs) {
            ModeCoeffs m(grid);
            m.coeffs = coeffs;
            deriv_inplace(m, 1);
            return to_values(m);
        };
        RealField r = field_of(rh), v = field_of(vh), s = field_of(sh);
        RealField dr = dfield_of(rh), dv = dfield_of(vh), ds = dfield_of(sh);

        RealField n_vel(grid), n_temp(grid);
        for (int i = 0; i < n; ++i) {
            n_vel[i] = -v[i] * dv[i] -
                       ((2.0 / 3.0) * s[i] - r[i]) / (1.0 + r[i]) * dr[i];
            n_temp[i] = -v[i] * ds[i] - (2.0 / 3.0) * s[i] * dv[i];
        }

        const bool viscous = opts.epsdelta > 0.0;
        RealField rho(grid), theta(grid), mu_th(grid);
        if (viscous) {
            for (int i = 0; i < n; ++i) {
                rho[i] = 1.0 + r[i];
                theta[i] = 1.5 + s[i];
            }
            mu_th = apply_fn(theta, opts.coeffs.mu);
            RealField kappa_th = apply_fn(theta, opts.coeffs.kappa);
            RealField visc_u = viscous_flux_div(mu_th, dv, rho, opts.epsdelta, 4.0 / 3.0);
            RealField cond = viscous_flux_div(kappa_th, ds, rho, opts.epsdelta, 1.0);
            for (int i = 0; i < n; ++i) {
                n_vel[i] += visc_u[i];
                n_temp[i] += cond[i] +
                             opts.epsdelta * (4.0 / 3.0) * mu_th[i] * dv[i] * dv[i] / rho[i];
            }
        }

        // mass channel: N = -dx(r v), assembled in mode space
        ModeCoeffs mass_hat = to_modes(pointwise(r, v));
        dealias_inplace(mass_hat);
        deriv_inplace(mass_hat, 1);

        ModeCoeffs vel_hat = to_modes(n_vel);
        ModeCoeffs temp_hat = to_modes(n_temp);
        dealias_inplace(vel_hat);
        dealias_inplace(temp_hat);

        ComplexVec nr(n), nv(n), nsv(n);
        for (int j = 0; j < n; ++j) {
            nr[j] = -mass_hat.coeffs[j];
            nv[j] = vel_hat.coeffs[j];
            nsv[j] = temp_hat.coeffs[j];
        }
        // back to eigen channels through V^{-1}
        StackedState tmp(3, ComplexVec(n));
        to_eigen(nr, nv, nsv, tmp);
        out[0] = tmp[0];
        out[1] = tmp[1];
        out[2] = tmp[2];

        if (opts.evolve_transverse) {
            for (int ch = 3; ch <= 4; ++ch) {
                RealField ui = field_of(y[ch]);
                RealField dui = dfield_of(y[ch]);
                RealField nch(grid);
                for (int i = 0; i < n; ++i) nch[i] = -v[i] * dui[i];
                if (viscous) {
                    RealField visc = viscous_flux_div(mu_th, dui, rho, opts.epsdelta, 1.0);
                    for (int i = 0; i < n; ++i) nch[i] += visc[i];
                    // transverse viscous heating feeds the temperature channel
                    ModeCoeffs heat = to_modes(pointwise(dui, dui));
                    dealias_inplace(heat);
                    RealField heat_f = to_values(heat);
                    RealField add(grid);
                    for (int i = 0; i < n; ++i)
                        add[i] = opts.epsdelta * mu_th[i] * heat_f[i] / rho[i];
                    ModeCoeffs add_hat = to_modes(add);
                    dealias_inplace(add_hat);
                    // fold into the temperature part of the eigen channels
                    ComplexVec zero(n, 0.0);
                    StackedState extra(3, ComplexVec(n));
                    to_eigen(zero, zero, add_hat.coeffs, extra);
                    for (int j = 0; j < n; ++j) {
                        out[0][j] += extra[0][j];
                        out[1][j] += extra[1][j];
                        out[2][j] += extra[2][j];
                    }
                }
                ModeCoeffs nch_hat = to_modes(nch);
                dealias_inplace(nch_hat);
                out[ch] = nch_hat.coeffs;
            }
        }
    }

    StackedState pack(const FluidState& s) const {
        auto trunc_modes = [&](const RealField& f, double base) {
            RealField d(grid);
            for (int i = 0; i < d.size(); ++i) d[i] = f[i] - base;
            ModeCoeffs m = to_modes(d);
            dealias_inplace(m);
            return m.coeffs;
        };
        ComplexVec rh = trunc_modes(s.rho, 1.0);
        ComplexVec vh = trunc_modes(s.u1, 0.0);
        ComplexVec sh = trunc_modes(s.theta, 1.5);
        const int ncomp = opts.evolve_transverse ? 5 : 3;
        StackedState y(ncomp, ComplexVec(grid->n));
        to_eigen(rh, vh, sh, y);
        if (opts.evolve_transverse) {
            y[3] = trunc_modes(s.u2 ? *s.u2 : constant_field(grid, 0.0), 0.0);
            y[4] = trunc_modes(s.u3 ? *s.u3 : constant_field(grid, 0.0), 0.0);
        }
        return y;
    }

    FluidState unpack(const StackedState& y, double time) const {
        const int n = grid->n;
        ComplexVec rh(n), vh(n), sh(n);
        from_eigen(y, rh, vh, sh);
        auto field_from = [&](const ComplexVec& coeffs, double base) {
            ModeCoeffs m(grid);
            m.coeffs = coeffs;
            RealField f = to_values(m);
            for (int i = 0; i < f.size(); ++i) f[i] += base;
            return f;
        };
        FluidState s;
        s.time = time;
        s.rho = field_from(rh, 1.0);
        s.u1 = field_from(vh, 0.0);
        s.theta = field_from(sh, 1.5);
        s.phi = poisson_solve(s.rho, opts.epsilon);
        if (opts.evolve_transverse) {
            s.u2 = field_from(y[3], 0.0);
            s.u3 = field_from(y[4], 0.0);
        }
        return s;
    }

    void check_admissible(const FluidState& s) const {
        if (!all_finite(s.rho) || !all_finite(s.u1) || !all_finite(s.theta))
            throw std::runtime_error("fluid step: non-finite values at t = " +
                                     std::to_string(s.time));
        double mn_rho = s.rho[0], mn_th = s.theta[0];
        for (int i = 0; i < s.rho.size(); ++i) {
            mn_rho = std::min(mn_rho, s.rho[i]);
            mn_th = std::min(mn_th, s.theta[i]);
        }
        if (mn_rho <= 0.0 || mn_th <= 0.0)
            throw std::runtime_error("fluid step: positivity violated at t = " +
                                     std::to_string(s.time) + " (min rho = " +
                                     std::to_string(mn_rho) + ", min theta = " +
                                     std::to_string(mn_th) + ")");
    }
};

FluidSolver::FluidSolver(GridPtr grid, double dt, Options opts)
    : impl_(std::make_shared<Impl>(std::move(grid), dt, std::move(opts))) {}

double FluidSolver::dt() const { return impl_->stepper.dt(); }

FluidState FluidSolver::step(const FluidState& s) {
    StackedState y = impl_->pack(s);
    auto N = [this](const StackedState& in, StackedState& out) { impl_->nonlinear(in, out); };
    impl_->stepper.step(y, N);
    FluidState next = impl_->unpack(y, s.time + impl_->stepper.dt());
    impl_->check_admissible(next);
    return next;
}

FluidTrajectory FluidSolver::run(const FluidState& init, double T, int stride) {
    const int nsteps = plan_steps(T, impl_->stepper.dt(), stride);
    const double dt = T / nsteps;
    Impl local(impl_->grid, dt, impl_->opts);
    auto N = [&local](const StackedState& in, StackedState& out) { local.nonlinear(in, out); };

    StackedState y = local.pack(init);
    FluidTrajectory traj;
    traj.grid = local.grid;
    traj.dt = dt;
    traj.stride = stride;

    auto snapshot = [&](int istep) {
        FluidState s = local.unpack(y, istep * dt);
        local.check_admissible(s);
        FluidDiagnostics d;
        d.time = s.time;
        RealField r(local.grid);
        for (int i = 0; i < r.size(); ++i) r[i] = s.rho[i] - 1.0;
        d.mass_mean = mean_value(r);
        {
            RealField d2phi = deriv(s.phi, 2);
            RealField res(local.grid);
            const double eps = local.opts.epsilon;
            for (int i = 0; i < res.size(); ++i)
                res[i] = -eps * eps * d2phi[i] + eps * s.phi[i] - r[i];
            d.poisson_residual_l2 = l2_norm(res);
        }
        d.min_rho = *std::min_element(s.rho.values.begin(), s.rho.values.end());
        d.min_theta = *std::min_element(s.theta.values.begin(), s.theta.values.end());
        d.rho_n = norms(s.rho);
        d.u1_n = norms(s.u1);
        d.theta_n = norms(s.theta);
        d.phi_n = norms(s.phi);
        traj.times.push_back(s.time);
        traj.diagnostics.push_back(d);
        traj.states.push_back(std::move(s));
    };

    snapshot(0);
    for (int istep = 1; istep <= nsteps; ++istep) {
        try {
            local.stepper.step(y, N);
            if (istep % stride == 0) snapshot(istep);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error(std::string(e.what()) + " [step " + std::to_string(istep) +
                                     " of " + std::to_string(nsteps) + ", dt = " +
                                     std::to_string(dt) + "]");
        }
    }
    return traj;
}

FluidState ep_step(const FluidState& s, double epsilon, double dt) {
    FluidSolver::Options o;
    o.epsilon = epsilon;
    FluidSolver solver(s.rho.grid, dt, o);
    return solver.step(s);
}

FluidTrajectory run_fluid(const FluidState& init, double epsilon, double epsdelta,
                          const TransportCoeffs& coeffs, double T, double dt, int stride) {
    FluidSolver::Options o;
    o.epsilon = epsilon;
    o.epsdelta = epsdelta;
    o.coeffs = coeffs;
    o.evolve_transverse = init.u2.has_value() || init.u3.has_value();
    FluidSolver solver(init.rho.grid, dt, o);
    return solver.run(init, T, stride);
}

}  // namespace iaw
