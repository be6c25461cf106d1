#include "iaw/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace iaw {

FitResult fit_order(const std::vector<std::pair<double, double>>& pairs) {
    const size_t n = pairs.size();
    if (n < 3) throw std::invalid_argument("fit_order: need at least 3 points");
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(pairs[i].first > 0.0) || !(pairs[i].second > 0.0))
            throw std::invalid_argument("fit_order: epsilons and norms must be positive");
        x[i] = std::log(pairs[i].first);
        y[i] = std::log(pairs[i].second);
    }
    double xm = 0.0, ym = 0.0;
    for (size_t i = 0; i < n; ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_order: epsilons must be distinct");
    FitResult r;
    r.slope = sxy / sxx;
    r.intercept = ym - r.slope * xm;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - (r.intercept + r.slope * x[i]);
        ss_res += e * e;
    }
    r.stderr_slope = (n > 2) ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return r;
}

}  // namespace iaw
