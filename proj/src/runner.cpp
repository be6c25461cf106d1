#include "iaw/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

namespace iaw {

namespace {

double sup_err(const std::vector<RealField>& a, const std::vector<RealField>& b, bool linf) {
    double best = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        RealField d = lincomb(1.0, a[i], -1.0, b[i]);
        best = std::max(best, linf ? linf_norm(d) : l2_norm(d));
    }
    return best;
}

struct SweepCase {
    double epsilon, nu;
};

}  // namespace

RealField build_initial_data(const RunConfig& cfg, const GridPtr& grid) {
    if (cfg.kdv_init == "soliton") return soliton_exact(grid, cfg.soliton_k, 0.0);
    std::ifstream in(cfg.init_file);
    if (!in) throw ConfigError("cannot open init_file " + cfg.init_file);
    std::vector<double> samples;
    double v;
    while (in >> v) samples.push_back(v);
    if (static_cast<int>(samples.size()) != grid->n)
        throw ConfigError("init_file has " + std::to_string(samples.size()) +
                          " samples, expected " + std::to_string(grid->n));
    return RealField(grid, std::move(samples));
}

HierarchyTrajectory solve_hierarchy_for(const RunConfig& cfg, const GridPtr& grid) {
    RealField init = build_initial_data(cfg, grid);
    return solve_hierarchy(init, cfg.T, cfg.dt, cfg.snapshot_stride);
}

CaseRecord run_case(const RunConfig& cfg, const HierarchyTrajectory& hierarchy, double epsilon,
                    double nu) {
    const auto t_start = std::chrono::steady_clock::now();

    ScalingParams params = make_scaling_params(epsilon, nu, cfg.c0, cfg.c1);
    CaseRecord rec;
    rec.epsilon = epsilon;
    rec.nu = nu;
    rec.delta = params.delta;
    rec.epsdelta = epsilon * params.delta;
    rec.beta = params.beta;
    rec.regime_finite = check_regime(params, RegimeBand::FiniteTime).in_band;
    rec.regime_global = check_regime(params, RegimeBand::Global).in_band;

    ProfileTrajectory profiles = build_profile_trajectory(hierarchy, epsilon);
    rec.theta3_gauge_mean = 0.0;
    for (const auto& cs : hierarchy.sets)
        rec.theta3_gauge_mean =
            std::max(rec.theta3_gauge_mean, std::abs(cs.theta3_integrand_mean));

    TransportCoeffs coeffs = TransportCoeffs::by_name(cfg.transport);
    rec.res_ep = profile_residual_ep(profiles);
    rec.res_nsp = profile_residual_nsp(profiles, coeffs, rec.epsdelta);

    // well-prepared fluid runs: initial data = profile at t = 0
    FluidState init = profile_as_fluid_state(profiles.profiles.front());
    FluidTrajectory ep = run_fluid(init, epsilon, 0.0, coeffs, cfg.T, cfg.dt, cfg.snapshot_stride);
    FluidTrajectory nsp =
        run_fluid(init, epsilon, rec.epsdelta, coeffs, cfg.T, cfg.dt, cfg.snapshot_stride);

    const size_t m = ep.states.size();
    if (m != profiles.profiles.size() || m != nsp.states.size())
        throw std::runtime_error("run_case: snapshot grids of fluid and profile do not align");

    std::vector<RealField> phi_f, phi0_ref, phibar_ref, rho_f, rhobar, u1_f, u1bar, th_f, thbar,
        phi_nsp;
    phi_f.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        phi_f.push_back(ep.states[i].phi);
        phi_nsp.push_back(nsp.states[i].phi);
        phi0_ref.push_back(hierarchy.sets[i].phi0);
        phibar_ref.push_back(profiles.profiles[i].phi_bar);
        rho_f.push_back(ep.states[i].rho);
        rhobar.push_back(profiles.profiles[i].rho_bar);
        u1_f.push_back(ep.states[i].u1);
        u1bar.push_back(profiles.profiles[i].u1_bar);
        th_f.push_back(ep.states[i].theta);
        thbar.push_back(profiles.profiles[i].theta_bar);
    }
    rec.err_phi_phi0_l2 = sup_err(phi_f, phi0_ref, false);
    rec.err_phi_phi0_linf = sup_err(phi_f, phi0_ref, true);
    rec.err_phi_phibar_l2 = sup_err(phi_f, phibar_ref, false);
    rec.err_phi_phibar_linf = sup_err(phi_f, phibar_ref, true);
    rec.err_rho_l2 = sup_err(rho_f, rhobar, false);
    rec.err_rho_linf = sup_err(rho_f, rhobar, true);
    rec.err_u1_l2 = sup_err(u1_f, u1bar, false);
    rec.err_u1_linf = sup_err(u1_f, u1bar, true);
    rec.err_theta_l2 = sup_err(th_f, thbar, false);
    rec.err_theta_linf = sup_err(th_f, thbar, true);
    rec.nsp_ep_phi_l2 = sup_err(phi_nsp, phi_f, false);

    rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
    return rec;
}

int resolve_thread_count(size_t ncases) {
    if (const char* env = std::getenv("IAWLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(std::min<size_t>(hw, std::max<size_t>(ncases, 1)));
}

SweepReport run_sweep(const RunConfig& cfg) {
    GridPtr grid = make_grid(cfg.length, cfg.n);
    HierarchyTrajectory hierarchy = solve_hierarchy_for(cfg, grid);

    std::vector<SweepCase> cases;
    if (cfg.nu_rule == "beta") {
        for (double beta : cfg.betas)
            for (double eps : cfg.epsilons)
                cases.push_back({eps, std::exp(beta * std::log(eps))});
    } else {
        for (double nu : cfg.nus)
            for (double eps : cfg.epsilons) cases.push_back({eps, nu});
    }

    std::vector<CaseRecord> records(cases.size());
    std::vector<std::exception_ptr> errors(cases.size());
    std::atomic<size_t> next{0};
    const int nthreads = resolve_thread_count(cases.size());
    auto worker = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= cases.size()) break;
            try {
                records[i] = run_case(cfg, hierarchy, cases[i].epsilon, cases[i].nu);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepReport report;
    report.config = cfg;
    report.digest = config_digest(cfg);
    report.records = std::move(records);

    // merged in a fixed order regardless of execution interleaving
    std::vector<size_t> order(report.records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const CaseRecord &ra = report.records[a], &rb = report.records[b];
        if (ra.beta != rb.beta) return ra.beta < rb.beta;
        return ra.epsilon > rb.epsilon;
    });
    {
        std::vector<CaseRecord> sorted;
        sorted.reserve(order.size());
        for (size_t i : order) sorted.push_back(report.records[i]);
        report.records = std::move(sorted);
    }

    // slopes vs epsilon within each beta group
    auto fit_group = [&](double beta_label, auto value, const std::string& name) {
        std::vector<std::pair<double, double>> pts;
        for (const CaseRecord& r : report.records)
            if (std::abs(r.beta - beta_label) < 1e-12 && value(r) > 0.0)
                pts.push_back({r.epsilon, value(r)});
        if (pts.size() >= 3) {
            char label[128];
            std::snprintf(label, sizeof(label), "%s_vs_eps_beta_%s", name.c_str(),
                          format_double(beta_label).c_str());
            report.slopes.push_back({label, fit_order(pts)});
        }
    };
    std::vector<double> beta_labels;
    for (const CaseRecord& r : report.records) {
        bool seen = false;
        for (double b : beta_labels)
            if (std::abs(b - r.beta) < 1e-12) seen = true;
        if (!seen) beta_labels.push_back(r.beta);
    }
    for (double b : beta_labels) {
        fit_group(b, [](const CaseRecord& r) { return r.res_ep.mass; }, "res_ep_mass");
        fit_group(b, [](const CaseRecord& r) { return r.res_ep.velocity; }, "res_ep_velocity");
        fit_group(b, [](const CaseRecord& r) { return r.res_ep.temperature; },
                  "res_ep_temperature");
        fit_group(b, [](const CaseRecord& r) { return r.res_ep.poisson; }, "res_ep_poisson");
        fit_group(b, [](const CaseRecord& r) { return r.err_phi_phi0_l2; }, "err_phi_phi0_l2");
        fit_group(b, [](const CaseRecord& r) { return r.err_phi_phibar_l2; },
                  "err_phi_phibar_l2");
    }

    // viscous-defect slope vs epsdelta at fixed epsilon (weak-collision probe)
    for (double eps : cfg.epsilons) {
        std::vector<std::pair<double, double>> pts;
        for (const CaseRecord& r : report.records)
            if (std::abs(r.epsilon - eps) < 1e-15 && r.nsp_ep_phi_l2 > 0.0 && r.epsdelta > 0.0)
                pts.push_back({r.epsdelta, r.nsp_ep_phi_l2});
        if (pts.size() >= 3) {
            char label[96];
            std::snprintf(label, sizeof(label), "nsp_ep_phi_vs_epsdelta_eps_%s",
                          format_double(eps).c_str());
            report.slopes.push_back({label, fit_order(pts)});
        }
    }
    return report;
}

KdvCommandResult run_kdv_command(const RunConfig& cfg) {
    GridPtr grid = make_grid(cfg.length, cfg.n);
    RealField init = build_initial_data(cfg, grid);
    KdvCommandResult res;
    if (cfg.kdv_init == "soliton") res.boundary_defect = soliton_boundary_defect(grid, cfg.soliton_k);

    KdVSolver solver(grid, cfg.dt);
    res.traj = solver.solve(init, cfg.T, cfg.snapshot_stride);

    KdvInvariants inv0 = kdv_invariants(res.traj.phi0.front());
    KdvInvariants invT = kdv_invariants(res.traj.phi0.back());
    auto rel = [](double a, double b) {
        const double scale = std::max(std::abs(a), 1e-30);
        return std::abs(b - a) / scale;
    };
    res.mass_drift = rel(inv0.mass, invT.mass);
    res.momentum_drift = rel(inv0.momentum, invT.momentum);
    res.hamiltonian_drift = rel(inv0.hamiltonian, invT.hamiltonian);

    if (cfg.kdv_init == "soliton") {
        double worst = 0.0;
        for (size_t i = 0; i < res.traj.times.size(); ++i) {
            RealField ref = soliton_exact(grid, cfg.soliton_k, res.traj.times[i]);
            RealField d = lincomb(1.0, res.traj.phi0[i], -1.0, ref);
            worst = std::max(worst, l2_norm(d) / l2_norm(ref));
        }
        res.soliton_rel_l2_err = worst;
    }
    return res;
}

void emit_kdv(const KdvCommandResult& result, const RunConfig& cfg, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_kdv: cannot create directory " + dir);
    std::ofstream out(dir + "/kdv_norms.csv", std::ios::binary);
    out << "time,l2,linf,mean,mass,momentum,hamiltonian\n";
    for (size_t i = 0; i < result.traj.times.size(); ++i) {
        Norms n = norms(result.traj.phi0[i]);
        KdvInvariants inv = kdv_invariants(result.traj.phi0[i]);
        out << format_double(result.traj.times[i]) << "," << format_double(n.l2) << ","
            << format_double(n.linf) << "," << format_double(n.mean) << ","
            << format_double(inv.mass) << "," << format_double(inv.momentum) << ","
            << format_double(inv.hamiltonian) << "\n";
    }
    SweepReport stub;
    stub.config = cfg;
    stub.digest = config_digest(cfg);
    std::ofstream mf(dir + "/manifest.json", std::ios::binary);
    mf << render_manifest_json(stub);
}

CorrectionsCommandResult run_corrections_command(const RunConfig& cfg) {
    GridPtr grid = make_grid(cfg.length, cfg.n);
    CorrectionsCommandResult res;
    res.traj = solve_hierarchy_for(cfg, grid);
    res.residuals = hierarchy_residuals(res.traj);
    for (const auto& cs : res.traj.sets)
        res.theta3_gauge_mean_max =
            std::max(res.theta3_gauge_mean_max, std::abs(cs.theta3_integrand_mean));
    return res;
}

void emit_corrections(const CorrectionsCommandResult& result, const RunConfig& cfg,
                      const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_corrections: cannot create directory " + dir);
    std::ofstream out(dir + "/residuals.csv", std::ios::binary);
    out << "equation,residual_l2\n";
    for (const auto& [label, value] : result.residuals)
        out << label << "," << format_double(value) << "\n";
    SweepReport stub;
    stub.config = cfg;
    stub.digest = config_digest(cfg);
    std::ofstream mf(dir + "/manifest.json", std::ios::binary);
    mf << render_manifest_json(stub);
}

std::vector<RegimeCase> run_regime_command(const RunConfig& cfg) {
    std::vector<RegimeCase> out;
    auto push = [&](double eps, double nu) {
        ScalingParams p = make_scaling_params(eps, nu, cfg.c0, cfg.c1);
        out.push_back({eps, nu, p.delta, p.beta, check_regime(p, RegimeBand::FiniteTime),
                       check_regime(p, RegimeBand::Global), below_beta_limit(p)});
    };
    if (cfg.nu_rule == "beta") {
        for (double beta : cfg.betas)
            for (double eps : cfg.epsilons) push(eps, std::exp(beta * std::log(eps)));
    } else {
        for (double nu : cfg.nus)
            for (double eps : cfg.epsilons) push(eps, nu);
    }
    return out;
}

void emit_regime(const std::vector<RegimeCase>& cases, const RunConfig& cfg,
                 const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_regime: cannot create directory " + dir);
    std::ofstream out(dir + "/regime.csv", std::ios::binary);
    out << "epsilon,nu,delta,beta,finite_band,global_band,below_beta_limit,"
           "finite_margin_low_log10,finite_margin_high_log10\n";
    for (const RegimeCase& c : cases)
        out << format_double(c.epsilon) << "," << format_double(c.nu) << ","
            << format_double(c.delta) << "," << format_double(c.beta) << ","
            << (c.finite.in_band ? 1 : 0) << "," << (c.global.in_band ? 1 : 0) << ","
            << (c.below_beta_limit ? 1 : 0) << "," << format_double(c.finite.margin_low_log10)
            << "," << format_double(c.finite.margin_high_log10) << "\n";
    SweepReport stub;
    stub.config = cfg;
    stub.digest = config_digest(cfg);
    std::ofstream mf(dir + "/manifest.json", std::ios::binary);
    mf << render_manifest_json(stub);
}

}  // namespace iaw
