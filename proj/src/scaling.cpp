#include "iaw/scaling.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "iaw/spectral.hpp"

namespace iaw {

namespace {
constexpr double kLogTol = 1e-12;
}

double delta_from_nu(double epsilon, double nu) {
    if (!(epsilon > 0.0) || !(nu > 0.0))
        throw std::invalid_argument("delta_from_nu: epsilon and nu must be positive");
    return std::exp(3.5 * std::log(epsilon) - std::log(nu));
}

ScalingParams make_scaling_params(double epsilon, double nu, double c0, double c1) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("scaling: epsilon must lie in (0,1)");
    if (!(nu > 0.0)) throw std::invalid_argument("scaling: nu must be positive");
    if (!(c0 > 0.0 && c0 < 0.5)) throw std::invalid_argument("scaling: c0 must lie in (0,1/2)");
    if (!(c1 > 0.0 && c1 < 1.0)) throw std::invalid_argument("scaling: c1 must lie in (0,1)");
    ScalingParams p;
    p.epsilon = epsilon;
    p.nu = nu;
    p.c0 = c0;
    p.c1 = c1;
    p.log_eps = std::log(epsilon);
    p.log_nu = std::log(nu);
    p.log_delta = 3.5 * p.log_eps - p.log_nu;
    p.delta = std::exp(p.log_delta);
    p.beta = p.log_nu / p.log_eps;
    return p;
}

RegimeReport check_regime(const ScalingParams& p, RegimeBand band) {
    const double lo_exp = (band == RegimeBand::FiniteTime) ? 1.5 : 3.0;  // lower edge of nu
    const double hi_exp = (band == RegimeBand::FiniteTime) ? 0.5 : 2.5;  // upper edge of nu

    const double ln_lower = (lo_exp - p.c0) * p.log_eps;  // smallest admissible ln nu (main band)
    const double ln_upper = (hi_exp + p.c0) * p.log_eps;  // largest admissible ln nu  (main band)
    const double ln_nu = p.log_nu;
    const double ln_c1 = std::log(p.c1);

    RegimeReport r;
    r.in_main_band = (ln_nu >= ln_lower - kLogTol) && (ln_nu <= ln_upper + kLogTol);
    // boundary families close the band at the exact endpoint orders:
    // nu = eps^{lo}/c with c in [c1, 1], and nu = c eps^{hi} with c in [c1, 1]
    const double ln_lo_edge = lo_exp * p.log_eps;
    const double ln_hi_edge = hi_exp * p.log_eps;
    r.on_lower_boundary =
        (ln_nu >= ln_lo_edge - kLogTol) && (ln_nu <= ln_lo_edge - ln_c1 + kLogTol);
    r.on_upper_boundary =
        (ln_nu >= ln_hi_edge + ln_c1 - kLogTol) && (ln_nu <= ln_hi_edge + kLogTol);
    r.in_band = r.in_main_band || r.on_lower_boundary || r.on_upper_boundary;

    const double log10e = 1.0 / std::log(10.0);
    r.margin_low_log10 = (ln_nu - ln_lower) * log10e;
    r.margin_high_log10 = (ln_upper - ln_nu) * log10e;
    return r;
}

bool below_beta_limit(const ScalingParams& p) { return p.beta < 3.5; }

namespace {

ScaledFields map_fields(const ScaledFields& in, const GridPtr& out_grid,
                        const std::function<double(double)>& point_map, double frho, double fu,
                        double ftheta, double fphi) {
    ModeCoeffs mr = to_modes(in.rho);
    ModeCoeffs mu = to_modes(in.u1);
    ModeCoeffs mt = to_modes(in.theta);
    ModeCoeffs mp = to_modes(in.phi);
    ScaledFields out{RealField(out_grid), RealField(out_grid), RealField(out_grid),
                     RealField(out_grid)};
    for (int i = 0; i < out_grid->n; ++i) {
        const double xs = point_map(out_grid->points[i]);
        out.rho[i] = frho * eval_interp(mr, xs);
        out.u1[i] = fu * eval_interp(mu, xs);
        out.theta[i] = ftheta * eval_interp(mt, xs);
        out.phi[i] = fphi * eval_interp(mp, xs);
    }
    return out;
}

}  // namespace

ScaledFields to_lab_frame(const ScaledFields& scaled, double epsilon, double t_lab,
                          const GridPtr& lab_grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("to_lab_frame: epsilon must be positive");
    const double sqrt_eps = std::sqrt(epsilon);
    auto point_map = [&](double x_lab) { return sqrt_eps * (x_lab - t_lab); };
    return map_fields(scaled, lab_grid, point_map, 1.0, epsilon, epsilon * epsilon, epsilon);
}

ScaledFields from_lab_frame(const ScaledFields& lab, double epsilon, double t_lab,
                            const GridPtr& scaled_grid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("from_lab_frame: epsilon must be positive");
    const double inv_sqrt_eps = 1.0 / std::sqrt(epsilon);
    auto point_map = [&](double x_scaled) { return t_lab + inv_sqrt_eps * x_scaled; };
    const double e2 = epsilon * epsilon;
    return map_fields(lab, scaled_grid, point_map, 1.0, 1.0 / epsilon, 1.0 / e2, 1.0 / epsilon);
}

}  // namespace iaw
