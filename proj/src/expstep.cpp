#include "iaw/expstep.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace iaw {

namespace {

using C = std::complex<double>;

C bracket_q(C z) { return (std::exp(z * 0.5) - 1.0) / z; }
C bracket_1(C z) { return (-4.0 - z + std::exp(z) * (4.0 - 3.0 * z + z * z)) / (z * z * z); }
C bracket_2(C z) { return 2.0 * (2.0 + z + std::exp(z) * (z - 2.0)) / (z * z * z); }
C bracket_3(C z) { return (-4.0 - 3.0 * z - z * z + std::exp(z) * (4.0 - z)) / (z * z * z); }

template <typename F>
C contour_average(F f, C z0) {
    // mean over a radius-1 circle; equals f(z0) for analytic f
    constexpr int m = 32;
    C acc = 0.0;
    for (int j = 0; j < m; ++j) {
        const double th = 2.0 * std::numbers::pi * (j + 0.5) / m;
        acc += f(z0 + C(std::cos(th), std::sin(th)));
    }
    return acc / static_cast<double>(m);
}

}  // namespace

Etdrk4Weights etdrk4_weights(C lambda, double dt) {
    const C z = lambda * dt;
    Etdrk4Weights w;
    w.E = std::exp(z);
    w.E2 = std::exp(z * 0.5);
    if (std::abs(z) < 0.5) {
        w.Q = dt * contour_average(bracket_q, z);
        w.f1 = dt * contour_average(bracket_1, z);
        w.f2 = dt * contour_average(bracket_2, z);
        w.f3 = dt * contour_average(bracket_3, z);
    } else {
        w.Q = dt * bracket_q(z);
        w.f1 = dt * bracket_1(z);
        w.f2 = dt * bracket_2(z);
        w.f3 = dt * bracket_3(z);
    }
    return w;
}

DiagEtdrk4::DiagEtdrk4(const std::vector<ComplexVec>& lambdas, double dt)
    : dt_(dt), ncomp_(lambdas.size()) {
    if (!(dt > 0.0)) throw std::invalid_argument("DiagEtdrk4: dt must be positive");
    w_.resize(ncomp_);
    for (size_t c = 0; c < ncomp_; ++c) {
        w_[c].reserve(lambdas[c].size());
        for (const C lam : lambdas[c]) w_[c].push_back(etdrk4_weights(lam, dt));
    }
    auto shape = [&] {
        StackedState s(ncomp_);
        for (size_t c = 0; c < ncomp_; ++c) s[c].assign(lambdas[c].size(), 0.0);
        return s;
    };
    a_ = shape();
    b_ = shape();
    c_ = shape();
    Nu_ = shape();
    Na_ = shape();
    Nb_ = shape();
    Nc_ = shape();
}

void DiagEtdrk4::step(StackedState& y, const NonlinearFn& N) {
    N(y, Nu_);
    for (size_t c = 0; c < ncomp_; ++c)
        for (size_t j = 0; j < y[c].size(); ++j)
            a_[c][j] = w_[c][j].E2 * y[c][j] + w_[c][j].Q * Nu_[c][j];

    N(a_, Na_);
    for (size_t c = 0; c < ncomp_; ++c)
        for (size_t j = 0; j < y[c].size(); ++j)
            b_[c][j] = w_[c][j].E2 * y[c][j] + w_[c][j].Q * Na_[c][j];

    N(b_, Nb_);
    for (size_t c = 0; c < ncomp_; ++c)
        for (size_t j = 0; j < y[c].size(); ++j)
            c_[c][j] = w_[c][j].E2 * a_[c][j] + w_[c][j].Q * (2.0 * Nb_[c][j] - Nu_[c][j]);

    N(c_, Nc_);
    for (size_t c = 0; c < ncomp_; ++c)
        for (size_t j = 0; j < y[c].size(); ++j)
            y[c][j] = w_[c][j].E * y[c][j] + w_[c][j].f1 * Nu_[c][j] +
                      w_[c][j].f2 * (Na_[c][j] + Nb_[c][j]) + w_[c][j].f3 * Nc_[c][j];
}

}  // namespace iaw
