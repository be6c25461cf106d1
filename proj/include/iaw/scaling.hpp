#ifndef IAW_SCALING_HPP
#define IAW_SCALING_HPP

#include "iaw/grid.hpp"

namespace iaw {

// Weak-collision parameter bookkeeping. delta = eps^{7/2} / nu; the viscous
// terms of the macroscopic system carry eps*delta. Exponent arithmetic is
// done on logarithms so eps down to 1e-4 stays accurate.

struct ScalingParams {
    double epsilon = 0.0;
    double nu = 0.0;
    double delta = 0.0;
    double beta = 0.0;  ///< log nu / log eps
    double c0 = 0.25;
    double c1 = 0.01;
    double log_eps = 0.0, log_nu = 0.0, log_delta = 0.0;
};

ScalingParams make_scaling_params(double epsilon, double nu, double c0 = 0.25, double c1 = 0.01);

/// delta = eps^{3.5} / nu, computed in log space.
double delta_from_nu(double epsilon, double nu);

enum class RegimeBand { FiniteTime, Global };

struct RegimeReport {
    bool in_band = false;
    bool in_main_band = false;      ///< eps^{hi-c0} <= nu <= eps^{lo+c0}
    bool on_lower_boundary = false; ///< nu in [eps^hi, eps^hi / c1]
    bool on_upper_boundary = false; ///< nu in [c1 eps^lo, eps^lo]
    double margin_low_log10 = 0.0;  ///< log10(nu) - log10(lower band edge)
    double margin_high_log10 = 0.0; ///< log10(upper band edge) - log10(nu)
};

/// Finite-time band: eps^{3/2 - c0} <= nu <= eps^{1/2 + c0}, closed at the
/// endpoint orders by the nu ~ eps^{3/2} and nu ~ eps^{1/2} boundary
/// families. Global band: the same with exponents 3 and 5/2.
RegimeReport check_regime(const ScalingParams& p, RegimeBand band);

/// Everything below Knudsen exponent 7/2; outside it the collision terms no
/// longer dominate.
bool below_beta_limit(const ScalingParams& p);

struct ScaledFields {
    RealField rho, u1, theta, phi;
};

/// Lab-frame samples: rho_lab(t,x) = rho(eps^{3/2} t, eps^{1/2}(x - t)),
/// u_lab = eps u(...), theta_lab = eps^2 theta(...), phi_lab = eps phi(...),
/// evaluated by trigonometric interpolation at the mapped points. The lab
/// grid should have length L / sqrt(eps) so the periodic wrap is consistent.
ScaledFields to_lab_frame(const ScaledFields& scaled, double epsilon, double t_lab,
                          const GridPtr& lab_grid);

/// Inverse map back onto a scaled-frame grid.
ScaledFields from_lab_frame(const ScaledFields& lab, double epsilon, double t_lab,
                            const GridPtr& scaled_grid);

}  // namespace iaw

#endif
