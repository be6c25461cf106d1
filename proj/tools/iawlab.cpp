// Batch CLI for the ion-acoustic KdV-limit laboratory.
//
//   iawlab kdv         --config cfg [--out dir]   KdV solve + invariants
//   iawlab corrections --config cfg [--out dir]   hierarchy + residuals
//   iawlab sweep       --config cfg [--out dir]   full convergence study
//   iawlab regime      --config cfg [--out dir]   collision-band report
//
// Exit codes: 0 success, 1 solver failure, 2 config error.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "iaw/runner.hpp"

namespace {

struct Args {
    std::string config_path;
    std::string out_dir;
};

iaw::RunConfig load(const Args& args) {
    iaw::RunConfig cfg = iaw::parse_config_file(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

int cmd_kdv(const Args& args) {
    iaw::RunConfig cfg = load(args);
    iaw::KdvCommandResult res = iaw::run_kdv_command(cfg);
    iaw::emit_kdv(res, cfg, cfg.out_dir);
    std::printf("kdv: %zu snapshots over T = %g (dt = %g)\n", res.traj.times.size(), cfg.T,
                res.traj.dt);
    if (res.soliton_rel_l2_err >= 0.0) {
        std::printf("  soliton rel L2 error (sup_t): %.3e\n", res.soliton_rel_l2_err);
        std::printf("  soliton boundary defect:      %.3e\n", res.boundary_defect);
        if (res.boundary_defect > 1e-10)
            std::printf("  warning: box too small for clean periodic wrap\n");
    }
    std::printf("  invariant drift (rel): mass %.3e  momentum %.3e  hamiltonian %.3e\n",
                res.mass_drift, res.momentum_drift, res.hamiltonian_drift);
    std::printf("  wrote %s/kdv_norms.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_corrections(const Args& args) {
    iaw::RunConfig cfg = load(args);
    iaw::CorrectionsCommandResult res = iaw::run_corrections_command(cfg);
    std::printf("corrections: %zu snapshots, residual L2 norms:\n", res.traj.times.size());
    for (const auto& [label, value] : res.residuals)
        std::printf("  %-14s %.6e\n", label.c_str(), value);
    std::printf("  theta3 antiderivative integrand mean (max |.|): %.3e\n",
                res.theta3_gauge_mean_max);
    if (res.theta3_gauge_mean_max > cfg.antideriv_mean_tol)
        std::printf("  warning: integrand mean above %.1e (box-truncation artifact)\n",
                    cfg.antideriv_mean_tol);
    iaw::emit_corrections(res, cfg, cfg.out_dir);
    std::printf("  wrote %s/residuals.csv\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_sweep(const Args& args) {
    iaw::RunConfig cfg = load(args);
    iaw::SweepReport report = iaw::run_sweep(cfg);
    iaw::emit_report(report, cfg.out_dir);
    std::printf("sweep: %zu cases -> %s\n", report.records.size(), cfg.out_dir.c_str());
    for (const auto& s : report.slopes)
        std::printf("  %-44s slope %+.3f (stderr %.3f)\n", s.label.c_str(), s.fit.slope,
                    s.fit.stderr_slope);
    return 0;
}

int cmd_regime(const Args& args) {
    iaw::RunConfig cfg = load(args);
    auto cases = iaw::run_regime_command(cfg);
    iaw::emit_regime(cases, cfg, cfg.out_dir);
    std::printf("regime: %zu cases\n", cases.size());
    for (const auto& c : cases)
        std::printf(
            "  eps %.4g nu %.4g (beta %.3f, delta %.3e): finite %s global %s beta<7/2 %s\n",
            c.epsilon, c.nu, c.beta, c.delta, c.finite.in_band ? "yes" : "no",
            c.global.in_band ? "yes" : "no", c.below_beta_limit ? "yes" : "no");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ion-acoustic KdV-limit laboratory"};
    app.require_subcommand(1);

    Args args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "configuration file")->required();
        sub->add_option("--out", args.out_dir, "output directory (overrides [output] dir)");
    };
    CLI::App* kdv = app.add_subcommand("kdv", "KdV solve with invariant diagnostics");
    CLI::App* corr = app.add_subcommand("corrections", "correction hierarchy and residuals");
    CLI::App* sweep = app.add_subcommand("sweep", "epsilon/nu convergence study");
    CLI::App* regime = app.add_subcommand("regime", "weak-collision band report");
    for (CLI::App* sub : {kdv, corr, sweep, regime}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (kdv->parsed()) return cmd_kdv(args);
        if (corr->parsed()) return cmd_corrections(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (regime->parsed()) return cmd_regime(args);
    } catch (const iaw::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
