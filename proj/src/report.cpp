#include "iaw/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace iaw {

namespace {

const char* kCsvHeader =
    "epsilon,nu,delta,epsdelta,beta,regime_finite,regime_global,"
    "res_ep_mass,res_ep_velocity,res_ep_temperature,res_ep_poisson,"
    "res_nsp_mass,res_nsp_velocity,res_nsp_temperature,res_nsp_poisson,"
    "err_phi_phi0_l2,err_phi_phi0_linf,err_phi_phibar_l2,err_phi_phibar_linf,"
    "err_rho_l2,err_rho_linf,err_u1_l2,err_u1_linf,err_theta_l2,err_theta_linf,"
    "nsp_ep_phi_l2,theta3_gauge_mean";

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Render log-log convergence figures from report.csv (same directory)."""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "report.csv"))))
if not rows:
    sys.exit("report.csv has no data rows")

for r in rows:
    for k in r:
        try:
            r[k] = float(r[k])
        except ValueError:
            pass

betas = sorted({round(r["beta"], 12) for r in rows})

fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
for beta in betas:
    grp = sorted((r for r in rows if round(r["beta"], 12) == beta),
                 key=lambda r: r["epsilon"])
    eps = [r["epsilon"] for r in grp]
    for key, style in (("res_ep_mass", "o-"), ("res_ep_velocity", "s-"),
                       ("res_ep_temperature", "^-"), ("res_ep_poisson", "d-")):
        axes[0].loglog(eps, [r[key] for r in grp], style,
                       label=f"{key} (beta={beta})" if beta == betas[0] else None)
    axes[1].loglog(eps, [r["err_phi_phi0_l2"] for r in grp], "o-",
                   label=f"|phi-phi0| beta={beta}")
    axes[1].loglog(eps, [r["err_phi_phibar_l2"] for r in grp], "s--",
                   label=f"|phi-phibar| beta={beta}")
axes[0].set_xlabel("epsilon"); axes[0].set_ylabel("profile residual L2")
axes[1].set_xlabel("epsilon"); axes[1].set_ylabel("sup_t error L2")
for ax in axes:
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
fig.tight_layout()
out = os.path.join(here, "convergence.png")
fig.savefig(out, dpi=150)
print("wrote", out)
)PY";

}  // namespace

std::string render_report_csv(const SweepReport& report) {
    std::string out = kCsvHeader;
    out += "\n";
    for (const CaseRecord& r : report.records) {
        std::vector<double> cols = {
            r.epsilon,
            r.nu,
            r.delta,
            r.epsdelta,
            r.beta,
            r.regime_finite ? 1.0 : 0.0,
            r.regime_global ? 1.0 : 0.0,
            r.res_ep.mass,
            r.res_ep.velocity,
            r.res_ep.temperature,
            r.res_ep.poisson,
            r.res_nsp.mass,
            r.res_nsp.velocity,
            r.res_nsp.temperature,
            r.res_nsp.poisson,
            r.err_phi_phi0_l2,
            r.err_phi_phi0_linf,
            r.err_phi_phibar_l2,
            r.err_phi_phibar_linf,
            r.err_rho_l2,
            r.err_rho_linf,
            r.err_u1_l2,
            r.err_u1_linf,
            r.err_theta_l2,
            r.err_theta_linf,
            r.nsp_ep_phi_l2,
            r.theta3_gauge_mean,
        };
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) out += ",";
            out += format_double(cols[i]);
        }
        out += "\n";
    }
    return out;
}

std::string render_manifest_json(const SweepReport& report) {
    nlohmann::json j;
    j["digest"] = report.digest;
    j["config"] = nlohmann::json::object();
    {
        std::istringstream canon(canonical_config(report.config));
        std::string line;
        while (std::getline(canon, line)) {
            const size_t eq = line.find('=');
            if (eq != std::string::npos) j["config"][line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    j["environment"] = {
        {"compiler",
#if defined(__clang__)
         std::string("clang ") + __clang_version__
#elif defined(__GNUC__)
         std::string("gcc ") + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__)
#else
         "unknown"
#endif
        },
        {"fft", "fftw3 estimate"},
    };
    j["slopes"] = nlohmann::json::array();
    for (const FitLine& s : report.slopes)
        j["slopes"].push_back({{"label", s.label},
                               {"slope", s.fit.slope},
                               {"intercept", s.fit.intercept},
                               {"stderr", s.fit.stderr_slope}});
    j["cases"] = nlohmann::json::array();
    for (const CaseRecord& r : report.records)
        j["cases"].push_back({{"epsilon", r.epsilon},
                              {"nu", r.nu},
                              {"delta", r.delta},
                              {"epsdelta", r.epsdelta},
                              {"beta", r.beta},
                              {"regime_finite", r.regime_finite},
                              {"regime_global", r.regime_global},
                              {"theta3_gauge_mean", r.theta3_gauge_mean}});
    return j.dump(2) + "\n";
}

void emit_report(const SweepReport& report, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("emit_report: cannot create directory " + dir);

    write_file(dir + "/report.csv", render_report_csv(report));

    std::string timings = "epsilon,nu,wall_ms\n";
    for (const CaseRecord& r : report.records)
        timings += format_double(r.epsilon) + "," + format_double(r.nu) + "," +
                   std::to_string(r.wall_ms) + "\n";
    write_file(dir + "/timings.csv", timings);

    write_file(dir + "/manifest.json", render_manifest_json(report));
    write_file(dir + "/plot_report.py", kPlotScript);
}

}  // namespace iaw
