#ifndef IAW_KDV_HPP
#define IAW_KDV_HPP

#include "iaw/expstep.hpp"
#include "iaw/grid.hpp"

namespace iaw {

// Leading-order profile phi0 = U0 obeys
//   dt phi0 = -1/2 dx^3 phi0 - 3/2 phi0 dx phi0,
// integrated with ETDRK4: the dispersion is applied exactly per mode, only
// the quadratic term is stepped explicitly.

struct KdVState {
    double time = 0.0;
    RealField phi0;
};

/// Full right-hand side (quadratic term dealiased).
RealField kdv_rhs(const RealField& phi0);

/// phi0(t,x) = 4 k^2 sech^2(k (x - x0 - 2 k^2 t)), x0 the box center,
/// wrapped periodically.
RealField soliton_exact(const GridPtr& grid, double k, double t);

/// Largest boundary sample relative to the soliton amplitude; a value above
/// ~1e-10 means the box is too small for clean periodic wrapping.
double soliton_boundary_defect(const GridPtr& grid, double k);

struct KdvInvariants {
    double mass;         ///< integral of phi0
    double momentum;     ///< integral of phi0^2
    double hamiltonian;  ///< integral of phi0^3/4 - (dx phi0)^2/4
};

KdvInvariants kdv_invariants(const RealField& phi0);

struct KdVTrajectory {
    GridPtr grid;
    double dt = 0.0;  ///< actual step used (T / nsteps)
    int stride = 1;
    std::vector<double> times;
    std::vector<RealField> phi0;
};

class KdVSolver {
  public:
    KdVSolver(GridPtr grid, double dt);

    KdVState step(const KdVState& s);

    /// Integrates [0, T]; nsteps is rounded up so that stride divides it and
    /// the last snapshot lands exactly on T.
    KdVTrajectory solve(const RealField& init, double T, int stride);

    double dt() const { return stepper_.dt(); }

  private:
    GridPtr grid_;
    DiagEtdrk4 stepper_;
};

/// One ETDRK4 step (convenience wrapper; builds the stepper per call).
KdVState kdv_step(const KdVState& s, double dt);

/// Rounds T/dt_request up to a multiple of stride and returns the step count.
int plan_steps(double T, double dt_request, int stride);

/// Exact per-mode dispersion factor of -1/2 dx^3: lambda_j = i k_j^3 / 2,
/// Nyquist zeroed. Shared by every solver that carries a KdV channel.
ComplexVec kdv_dispersion_lambda(const Grid1D& g);

/// Explicit channel of the stepper: -(3/4) dx(phi^2) in mode space, product
/// truncated to the 2/3 band.
void kdv_quadratic_rhs(const GridPtr& grid, const ComplexVec& phi_hat, ComplexVec& out);

}  // namespace iaw

#endif
