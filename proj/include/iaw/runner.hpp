#ifndef IAW_RUNNER_HPP
#define IAW_RUNNER_HPP

#include <map>

#include "iaw/report.hpp"
#include "iaw/scaling.hpp"

namespace iaw {

// Configuration-driven orchestration. A sweep runs the chain
//   KdV solve -> correction hierarchy -> profile -> fluid runs
// once per (epsilon, nu) case with well-prepared initial data (fluid state
// = profile at t = 0). Cases execute in parallel (IAWLAB_THREADS overrides
// the worker count) with no shared mutable state; records are merged in a
// fixed order so identical configs yield byte-identical tables.

RealField build_initial_data(const RunConfig& cfg, const GridPtr& grid);

/// The correction hierarchy does not depend on epsilon or nu, so a sweep
/// computes it once and shares it read-only across cases.
HierarchyTrajectory solve_hierarchy_for(const RunConfig& cfg, const GridPtr& grid);

CaseRecord run_case(const RunConfig& cfg, const HierarchyTrajectory& hierarchy, double epsilon,
                    double nu);

SweepReport run_sweep(const RunConfig& cfg);

struct KdvCommandResult {
    KdVTrajectory traj;
    double soliton_rel_l2_err = -1.0;  ///< -1 when init is not a soliton
    double mass_drift = 0.0, momentum_drift = 0.0, hamiltonian_drift = 0.0;  ///< relative
    double boundary_defect = 0.0;
};

KdvCommandResult run_kdv_command(const RunConfig& cfg);
void emit_kdv(const KdvCommandResult& result, const RunConfig& cfg, const std::string& dir);

struct CorrectionsCommandResult {
    HierarchyTrajectory traj;
    std::map<std::string, double> residuals;
    double theta3_gauge_mean_max = 0.0;
};

CorrectionsCommandResult run_corrections_command(const RunConfig& cfg);
void emit_corrections(const CorrectionsCommandResult& result, const RunConfig& cfg,
                      const std::string& dir);

struct RegimeCase {
    double epsilon, nu, delta, beta;
    RegimeReport finite, global;
    bool below_beta_limit;
};

std::vector<RegimeCase> run_regime_command(const RunConfig& cfg);
void emit_regime(const std::vector<RegimeCase>& cases, const RunConfig& cfg,
                 const std::string& dir);

/// Worker count: IAWLAB_THREADS when set, otherwise min(hardware, cases).
int resolve_thread_count(size_t ncases);

}  // namespace iaw

#endif
