// pybind11 surface over the main operations: spectral tool kit, KdV solve,
// correction hierarchy, profile residuals, fluid runs, scalings and fits.
// Fields cross the boundary as 1-D numpy arrays tied to a Grid handle.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iaw/runner.hpp"

namespace py = pybind11;
using namespace iaw;

namespace {

/// python-side handle; pybind11 cannot hold shared_ptr-to-const directly
struct GridHandle {
    GridPtr ptr;
};

RealField field_from(const GridHandle& g, py::array_t<double, py::array::c_style> arr) {
    if (arr.ndim() != 1 || arr.shape(0) != g.ptr->n)
        throw std::invalid_argument("expected a 1-D array with one sample per grid point");
    std::vector<double> v(arr.data(), arr.data() + g.ptr->n);
    return RealField(g.ptr, std::move(v));
}

py::array_t<double> array_from(const RealField& f) {
    py::array_t<double> out(f.values.size());
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

py::array_t<std::complex<double>> array_from(const ModeCoeffs& m) {
    py::array_t<std::complex<double>> out(m.coeffs.size());
    std::copy(m.coeffs.begin(), m.coeffs.end(), out.mutable_data());
    return out;
}

py::list arrays_from(const std::vector<RealField>& fields) {
    py::list out;
    for (const auto& f : fields) out.append(array_from(f));
    return out;
}

TransportCoeffs coeffs_by_name(const std::string& name) { return TransportCoeffs::by_name(name); }

}  // namespace

PYBIND11_MODULE(iawlab, m) {
    m.doc() = "pseudospectral laboratory for the ion-acoustic KdV limit";

    py::class_<GridHandle>(m, "Grid")
        .def_property_readonly("length", [](const GridHandle& g) { return g.ptr->length; })
        .def_property_readonly("n", [](const GridHandle& g) { return g.ptr->n; })
        .def_property_readonly("spacing", [](const GridHandle& g) { return g.ptr->spacing; })
        .def_property_readonly("wavenumbers",
                               [](const GridHandle& g) {
                                   py::array_t<double> out(g.ptr->wavenumbers.size());
                                   std::copy(g.ptr->wavenumbers.begin(), g.ptr->wavenumbers.end(),
                                             out.mutable_data());
                                   return out;
                               })
        .def_property_readonly("points", [](const GridHandle& g) {
            py::array_t<double> out(g.ptr->points.size());
            std::copy(g.ptr->points.begin(), g.ptr->points.end(), out.mutable_data());
            return out;
        });

    m.def("make_grid",
          [](double length, int n) { return GridHandle{make_grid(length, n)}; },
          py::arg("length"), py::arg("n"));

    // spectral core
    m.def("deriv", [](const GridHandle& g, py::array_t<double> f, int order) {
        return array_from(deriv(field_from(g, f), order));
    });
    m.def("antideriv_zero_mean", [](const GridHandle& g, py::array_t<double> f) {
        Antideriv a = antideriv_zero_mean(field_from(g, f));
        return py::make_tuple(array_from(a.field), a.mean);
    });
    m.def("to_modes",
          [](const GridHandle& g, py::array_t<double> f) { return array_from(to_modes(field_from(g, f))); });
    m.def("to_values", [](const GridHandle& g, py::array_t<std::complex<double>> coeffs) {
        ModeCoeffs mc(g.ptr);
        if (coeffs.ndim() != 1 || coeffs.shape(0) != g.ptr->n)
            throw std::invalid_argument("expected n complex coefficients");
        std::copy(coeffs.data(), coeffs.data() + g.ptr->n, mc.coeffs.begin());
        return array_from(to_values(mc));
    });
    m.def("dealias", [](const GridHandle& g, py::array_t<std::complex<double>> coeffs) {
        ModeCoeffs mc(g.ptr);
        std::copy(coeffs.data(), coeffs.data() + g.ptr->n, mc.coeffs.begin());
        return array_from(dealias(mc));
    });
    m.def("dbg_read", [](const GridHandle& g) {
        return py::make_tuple(g.ptr.use_count(), g.ptr->wavenumbers.size(),
                              g.ptr->wavenumbers.size() > 1 ? g.ptr->wavenumbers[1] : -1.0,
                              g.ptr->spacing);
    });
    m.def("dbg_k1", [them = 0]() {
        GridPtr gp = make_grid(2.0 * 3.14159265358979323846, 64);
        return py::make_tuple(gp->wavenumbers[1], gp->points[1], gp->spacing);
    });
    m.def("dbg_probe", [](const GridHandle& g, py::array_t<double> f) {
        py::array_t<double, py::array::c_style> arr(f);
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < g.ptr->n; ++i) s1 += f.data()[i];
        for (int i = 0; i < g.ptr->n; ++i) s2 += arr.data()[i];
        RealField ff = field_from(g, f);
        double s3 = 0.0;
        for (double v : ff.values) s3 += v;
        return py::make_tuple(s1, s2, s3, arr.ndim(), (long long)arr.shape(0));
    });
    m.def("norms", [](const GridHandle& g, py::array_t<double> f) {
        Norms n = norms(field_from(g, f));
        return py::make_tuple(n.l2, n.linf, n.mean);
    });

    // KdV
    m.def("kdv_rhs",
          [](const GridHandle& g, py::array_t<double> f) { return array_from(kdv_rhs(field_from(g, f))); });
    m.def("soliton_exact", [](const GridHandle& g, double k, double t) {
        return array_from(soliton_exact(g.ptr, k, t));
    });
    m.def("kdv_invariants", [](const GridHandle& g, py::array_t<double> f) {
        KdvInvariants inv = kdv_invariants(field_from(g, f));
        return py::make_tuple(inv.mass, inv.momentum, inv.hamiltonian);
    });
    m.def("kdv_solve",
          [](const GridHandle& g, py::array_t<double> init, double T, double dt, int stride) {
              KdVSolver solver(g.ptr, dt);
              KdVTrajectory traj = solver.solve(field_from(g, init), T, stride);
              return py::make_tuple(traj.times, arrays_from(traj.phi0));
          },
          py::arg("grid"), py::arg("init"), py::arg("T"), py::arg("dt"), py::arg("stride") = 1);

    // correction hierarchy
    m.def("n1_source", [](const GridHandle& g, py::array_t<double> u0) {
        return array_from(n1_source(field_from(g, u0)));
    });
    m.def("n2_source", [](const GridHandle& g, py::array_t<double> u0, py::array_t<double> u1,
                          py::array_t<double> rho2, py::array_t<double> theta2) {
        return array_from(n2_source(field_from(g, u0), field_from(g, u1), field_from(g, rho2),
                                    field_from(g, theta2)));
    });
    m.def("level2_algebraic", [](const GridHandle& g, py::array_t<double> u0, py::array_t<double> u1) {
        Level2 lv = level2_algebraic(field_from(g, u0), field_from(g, u1));
        return py::make_tuple(array_from(lv.rho2), array_from(lv.phi1), array_from(lv.theta2));
    });
    m.def("recover_level3", [](const GridHandle& g, py::array_t<double> u0, py::array_t<double> u1,
                               py::array_t<double> u2) {
        Level3 lv = recover_level3(field_from(g, u0), field_from(g, u1), field_from(g, u2));
        return py::make_tuple(array_from(lv.rho3), array_from(lv.phi2), array_from(lv.theta3),
                              lv.theta3_integrand_mean);
    });

    py::class_<HierarchyTrajectory>(m, "HierarchyTrajectory")
        .def_readonly("times", &HierarchyTrajectory::times)
        .def("set", [](const HierarchyTrajectory& t, size_t i) {
            const CorrectionSet& cs = t.sets.at(i);
            py::dict d;
            d["time"] = cs.time;
            d["U0"] = array_from(cs.U0);
            d["U1"] = array_from(cs.U1);
            d["U2"] = array_from(cs.U2);
            d["rho2"] = array_from(cs.rho2);
            d["rho3"] = array_from(cs.rho3);
            d["theta2"] = array_from(cs.theta2);
            d["theta3"] = array_from(cs.theta3);
            d["phi1"] = array_from(cs.phi1);
            d["phi2"] = array_from(cs.phi2);
            d["theta3_integrand_mean"] = cs.theta3_integrand_mean;
            return d;
        });

    m.def("solve_hierarchy",
          [](const GridHandle& g, py::array_t<double> phi0, double T, double dt, int stride) {
              return solve_hierarchy(field_from(g, phi0), T, dt, stride);
          },
          py::arg("grid"), py::arg("phi0_init"), py::arg("T"), py::arg("dt"), py::arg("stride"));
    m.def("hierarchy_residuals", &hierarchy_residuals);

    // profile
    m.def("profile_residuals",
          [](const HierarchyTrajectory& traj, double epsilon, double epsdelta,
             const std::string& transport) {
              ProfileTrajectory p = build_profile_trajectory(traj, epsilon);
              ResidualNorms r = (epsdelta > 0.0)
                                    ? profile_residual_nsp(p, coeffs_by_name(transport), epsdelta)
                                    : profile_residual_ep(p);
              py::dict d;
              d["mass"] = r.mass;
              d["velocity"] = r.velocity;
              d["temperature"] = r.temperature;
              d["poisson"] = r.poisson;
              return d;
          },
          py::arg("hierarchy"), py::arg("epsilon"), py::arg("epsdelta") = 0.0,
          py::arg("transport") = "constant");
    m.def("build_profile", [](const HierarchyTrajectory& traj, size_t i, double epsilon) {
        ApproxProfile p = build_profile(traj.sets.at(i), epsilon);
        py::dict d;
        d["rho_bar"] = array_from(p.rho_bar);
        d["u1_bar"] = array_from(p.u1_bar);
        d["theta_bar"] = array_from(p.theta_bar);
        d["phi_bar"] = array_from(p.phi_bar);
        return d;
    });

    // fluid
    m.def("poisson_solve", [](const GridHandle& g, py::array_t<double> rho, double epsilon) {
        return array_from(poisson_solve(field_from(g, rho), epsilon));
    });
    m.def("ep_rhs", [](const GridHandle& g, py::array_t<double> rho, py::array_t<double> u1,
                       py::array_t<double> theta, double epsilon) {
        FluidState s;
        s.rho = field_from(g, rho);
        s.u1 = field_from(g, u1);
        s.theta = field_from(g, theta);
        s.phi = poisson_solve(s.rho, epsilon);
        FluidRhs r = ep_rhs(s, epsilon);
        return py::make_tuple(array_from(r.drho), array_from(r.du1), array_from(r.dtheta));
    });
    m.def("ep_mode_frequency", &ep_mode_frequency, py::arg("k"), py::arg("epsilon"));
    m.def("run_fluid",
          [](const GridHandle& g, py::array_t<double> rho, py::array_t<double> u1,
             py::array_t<double> theta, double epsilon, double epsdelta,
             const std::string& transport, double T, double dt, int stride) {
              FluidState s;
              s.rho = field_from(g, rho);
              s.u1 = field_from(g, u1);
              s.theta = field_from(g, theta);
              s.phi = poisson_solve(s.rho, epsilon);
              FluidTrajectory traj =
                  run_fluid(s, epsilon, epsdelta, coeffs_by_name(transport), T, dt, stride);
              py::dict d;
              d["times"] = traj.times;
              py::list rhos, u1s, thetas, phis;
              for (const auto& st : traj.states) {
                  rhos.append(array_from(st.rho));
                  u1s.append(array_from(st.u1));
                  thetas.append(array_from(st.theta));
                  phis.append(array_from(st.phi));
              }
              d["rho"] = rhos;
              d["u1"] = u1s;
              d["theta"] = thetas;
              d["phi"] = phis;
              py::list mass, poisson_res;
              for (const auto& dg : traj.diagnostics) {
                  mass.append(dg.mass_mean);
                  poisson_res.append(dg.poisson_residual_l2);
              }
              d["mass_mean"] = mass;
              d["poisson_residual_l2"] = poisson_res;
              return d;
          },
          py::arg("grid"), py::arg("rho"), py::arg("u1"), py::arg("theta"), py::arg("epsilon"),
          py::arg("epsdelta") = 0.0, py::arg("transport") = "constant", py::arg("T") = 1.0,
          py::arg("dt") = 1e-3, py::arg("stride") = 20);

    // scalings and fits
    m.def("delta_from_nu", &delta_from_nu, py::arg("epsilon"), py::arg("nu"));
    m.def("check_regime",
          [](double epsilon, double nu, const std::string& band, double c0, double c1) {
              ScalingParams p = make_scaling_params(epsilon, nu, c0, c1);
              RegimeBand b = (band == "global") ? RegimeBand::Global : RegimeBand::FiniteTime;
              RegimeReport r = check_regime(p, b);
              py::dict d;
              d["in_band"] = r.in_band;
              d["in_main_band"] = r.in_main_band;
              d["on_lower_boundary"] = r.on_lower_boundary;
              d["on_upper_boundary"] = r.on_upper_boundary;
              d["margin_low_log10"] = r.margin_low_log10;
              d["margin_high_log10"] = r.margin_high_log10;
              d["beta"] = p.beta;
              d["delta"] = p.delta;
              return d;
          },
          py::arg("epsilon"), py::arg("nu"), py::arg("band") = "finite", py::arg("c0") = 0.25,
          py::arg("c1") = 0.01);
    m.def("to_lab_frame",
          [](const GridHandle& gs, py::array_t<double> rho, py::array_t<double> u1,
             py::array_t<double> theta, py::array_t<double> phi, double epsilon, double t_lab,
             const GridHandle& lab_grid) {
              ScaledFields s{field_from(gs, rho), field_from(gs, u1), field_from(gs, theta),
                             field_from(gs, phi)};
              ScaledFields lab = to_lab_frame(s, epsilon, t_lab, lab_grid.ptr);
              return py::make_tuple(array_from(lab.rho), array_from(lab.u1),
                                    array_from(lab.theta), array_from(lab.phi));
          });
    m.def("from_lab_frame",
          [](const GridHandle& gl, py::array_t<double> rho, py::array_t<double> u1,
             py::array_t<double> theta, py::array_t<double> phi, double epsilon, double t_lab,
             const GridHandle& scaled_grid) {
              ScaledFields s{field_from(gl, rho), field_from(gl, u1), field_from(gl, theta),
                             field_from(gl, phi)};
              ScaledFields sc = from_lab_frame(s, epsilon, t_lab, scaled_grid.ptr);
              return py::make_tuple(array_from(sc.rho), array_from(sc.u1), array_from(sc.theta),
                                    array_from(sc.phi));
          });
    m.def("fit_order", [](const std::vector<std::pair<double, double>>& pts) {
        FitResult f = fit_order(pts);
        return py::make_tuple(f.slope, f.intercept, f.stderr_slope);
    });

    // harness
    m.def("run_sweep",
          [](const std::string& config_path, const std::string& out_dir) {
              RunConfig cfg = parse_config_file(config_path);
              if (!out_dir.empty()) cfg.out_dir = out_dir;
              SweepReport report = run_sweep(cfg);
              emit_report(report, cfg.out_dir);
              py::dict d;
              for (const auto& s : report.slopes) d[py::str(s.label)] = s.fit.slope;
              return d;
          },
          py::arg("config_path"), py::arg("out_dir") = "");
}
