#ifndef IAW_REPORT_HPP
#define IAW_REPORT_HPP

#include <string>
#include <vector>

#include "iaw/config.hpp"
#include "iaw/fitting.hpp"
#include "iaw/profile.hpp"

namespace iaw {

/// One (epsilon, nu) convergence-table column. Error norms are sups over the
/// stored snapshot times.
struct CaseRecord {
    double epsilon = 0.0;
    double nu = 0.0;
    double delta = 0.0;
    double epsdelta = 0.0;
    double beta = 0.0;
    bool regime_finite = false;
    bool regime_global = false;

    ResidualNorms res_ep;
    ResidualNorms res_nsp;

    double err_phi_phi0_l2 = 0.0, err_phi_phi0_linf = 0.0;
    double err_phi_phibar_l2 = 0.0, err_phi_phibar_linf = 0.0;
    double err_rho_l2 = 0.0, err_rho_linf = 0.0;
    double err_u1_l2 = 0.0, err_u1_linf = 0.0;
    double err_theta_l2 = 0.0, err_theta_linf = 0.0;
    double nsp_ep_phi_l2 = 0.0;

    double theta3_gauge_mean = 0.0;
    long long wall_ms = 0;
};

struct FitLine {
    std::string label;
    FitResult fit;
};

struct SweepReport {
    RunConfig config;
    uint64_t digest = 0;
    std::vector<CaseRecord> records;
    std::vector<FitLine> slopes;
};

/// Writes, under dir:
///   report.csv     deterministic data table (documented header)
///   timings.csv    wall-clock per case (excluded from the determinism contract)
///   manifest.json  config echo + digest + environment stamp + slopes
///   plot_report.py matplotlib script rendering log-log convergence figures
/// Identical reports re-emit byte-identically.
void emit_report(const SweepReport& report, const std::string& dir);

/// The deterministic table as a string (what report.csv contains).
std::string render_report_csv(const SweepReport& report);

std::string render_manifest_json(const SweepReport& report);

}  // namespace iaw

#endif
