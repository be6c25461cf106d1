#ifndef IAW_EXPSTEP_HPP
#define IAW_EXPSTEP_HPP

#include <complex>
#include <functional>
#include <vector>

namespace iaw {

using ComplexVec = std::vector<std::complex<double>>;
/// One complex coefficient vector per solution component.
using StackedState = std::vector<ComplexVec>;

/// Cox-Matthews ETDRK4 weights for a single eigenvalue z = lambda*dt.
/// Number brackets with removable singularities at z = 0 are evaluated by
/// averaging over a unit circle around z (Kassam-Trefethen), so small |z|
/// never cancels catastrophically. At lambda = 0 the scheme reduces exactly
/// to classical RK4.
struct Etdrk4Weights {
    std::complex<double> E;   ///< exp(z)
    std::complex<double> E2;  ///< exp(z/2)
    std::complex<double> Q;   ///< dt * (exp(z/2)-1)/z
    std::complex<double> f1;  ///< dt * (-4 - z + e^z (4 - 3z + z^2)) / z^3
    std::complex<double> f2;  ///< dt * 2 (2 + z + e^z (z - 2)) / z^3
    std::complex<double> f3;  ///< dt * (-4 - 3z - z^2 + e^z (4 - z)) / z^3
};

Etdrk4Weights etdrk4_weights(std::complex<double> lambda, double dt);

/// ETDRK4 for systems whose linear part is diagonal in coefficient space:
/// one eigenvalue per (component, mode) entry. Stiff linear phases are
/// propagated exactly; the caller-supplied functor evaluates the remaining
/// nonlinear part in coefficient space.
class DiagEtdrk4 {
  public:
    using NonlinearFn = std::function<void(const StackedState& y, StackedState& out)>;

    DiagEtdrk4(const std::vector<ComplexVec>& lambdas, double dt);

    void step(StackedState& y, const NonlinearFn& N);
    double dt() const { return dt_; }

  private:
    double dt_;
    size_t ncomp_;
    std::vector<std::vector<Etdrk4Weights>> w_;
    StackedState a_, b_, c_, Nu_, Na_, Nb_, Nc_;
};

}  // namespace iaw

#endif
