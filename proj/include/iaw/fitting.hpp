#ifndef IAW_FITTING_HPP
#define IAW_FITTING_HPP

#include <utility>
#include <vector>

namespace iaw {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

/// Least-squares fit of log(norm) against log(epsilon). Requires at least
/// three points with strictly positive norms.
FitResult fit_order(const std::vector<std::pair<double, double>>& eps_norm_pairs);

}  // namespace iaw

#endif
