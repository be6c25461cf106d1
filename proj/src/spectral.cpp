#include "iaw/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace iaw {

namespace {

// One forward/backward plan pair per transform size. Plans are created with
// FFTW_ESTIMATE so results do not depend on runtime measurement, and with
// FFTW_UNALIGNED so they can execute on any caller buffer.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

class PlanCache {
  public:
    static PlanPair get(int n) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto it = cache.plans_.find(n);
        if (it != cache.plans_.end()) return it->second;
        std::vector<std::complex<double>> a(n), b(n);
        PlanPair p;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.forward = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                     reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD, flags);
        p.backward = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                      reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD, flags);
        cache.plans_.emplace(n, p);
        return p;
    }

  private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }
    std::mutex mutex_;
    std::map<int, PlanPair> plans_;
};

void execute(fftw_plan plan, std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out) {
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

int dealias_cut(const Grid1D& g) {
    // keep |j| <= floor(2/3 * n/2); zero the rest including Nyquist
    return (2 * (g.n / 2)) / 3;
}

}  // namespace

ModeCoeffs to_modes(const RealField& f) {
    const int n = f.grid->n;
    ModeCoeffs m(f.grid);
    std::vector<std::complex<double>> in(n);
    for (int i = 0; i < n; ++i) in[i] = f[i];
    execute(PlanCache::get(n).forward, in, m.coeffs);
    return m;
}

RealField to_values(const ModeCoeffs& m) {
    const int n = m.grid->n;
    std::vector<std::complex<double>> out(n);
    std::vector<std::complex<double>> in(m.coeffs);
    execute(PlanCache::get(n).backward, in, out);
    RealField f(m.grid);
    const double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) f[i] = out[i].real() * inv;
    return f;
}

void deriv_inplace(ModeCoeffs& m, int order) {
    if (order < 1) throw std::invalid_argument("deriv: order must be >= 1");
    const Grid1D& g = *m.grid;
    for (int j = 0; j < g.n; ++j) {
        const std::complex<double> ik(0.0, g.wavenumbers[j]);
        std::complex<double> factor = 1.0;
        for (int p = 0; p < order; ++p) factor *= ik;
        m.coeffs[j] *= factor;
    }
    if (order % 2 == 1) m.coeffs[g.n / 2] = 0.0;  // no symmetric partner for the Nyquist mode
}

RealField deriv(const RealField& f, int order) {
    ModeCoeffs m = to_modes(f);
    deriv_inplace(m, order);
    return to_values(m);
}

Antideriv antideriv_zero_mean(const RealField& f) {
    ModeCoeffs m = to_modes(f);
    const Grid1D& g = *m.grid;
    const double mean = m.coeffs[0].real() / g.n;
    m.coeffs[0] = 0.0;
    m.coeffs[g.n / 2] = 0.0;
    for (int j = 1; j < g.n; ++j) {
        if (j == g.n / 2) continue;
        m.coeffs[j] /= std::complex<double>(0.0, g.wavenumbers[j]);
    }
    return {to_values(m), mean};
}

void dealias_inplace(ModeCoeffs& m) {
    const Grid1D& g = *m.grid;
    const int cut = dealias_cut(g);
    for (int j = 0; j < g.n; ++j) {
        const int js = (j <= g.n / 2) ? j : j - g.n;
        if (std::abs(js) > cut) m.coeffs[j] = 0.0;
    }
}

ModeCoeffs dealias(const ModeCoeffs& m) {
    ModeCoeffs out = m;
    dealias_inplace(out);
    return out;
}

RealField dealias(const RealField& f) {
    ModeCoeffs m = to_modes(f);
    dealias_inplace(m);
    return to_values(m);
}

RealField dealiased_product(const RealField& f, const RealField& g) {
    RealField p = pointwise(dealias(f), dealias(g));
    return dealias(p);
}

Norms norms(const RealField& f) {
    double sq = 0.0, mx = 0.0, sum = 0.0;
    for (double v : f.values) {
        sq += v * v;
        mx = std::max(mx, std::abs(v));
        sum += v;
    }
    return {std::sqrt(sq * f.grid->spacing), mx, sum / f.grid->n};
}

double l2_norm(const RealField& f) { return norms(f).l2; }
double linf_norm(const RealField& f) { return norms(f).linf; }
double mean_value(const RealField& f) { return norms(f).mean; }

double integral(const RealField& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v;
    return sum * f.grid->spacing;
}

double eval_interp(const ModeCoeffs& m, double x) {
    const Grid1D& g = *m.grid;
    double xw = std::fmod(x, g.length);
    if (xw < 0.0) xw += g.length;
    std::complex<double> acc = 0.0;
    for (int j = 0; j < g.n; ++j) {
        double k = g.wavenumbers[j];
        std::complex<double> c = m.coeffs[j];
        if (j == g.n / 2) c *= 0.5;  // split the Nyquist mode between +/-k
        acc += c * std::exp(std::complex<double>(0.0, k * xw));
        if (j == g.n / 2) acc += c * std::exp(std::complex<double>(0.0, -k * xw));
    }
    return acc.real() / g.n;
}

}  // namespace iaw
