#ifndef IAW_SPECTRAL_HPP
#define IAW_SPECTRAL_HPP

#include "iaw/grid.hpp"

namespace iaw {

// Periodic pseudospectral tool kit. All operations are pure; transforms of a
// given size share a cached FFTW plan (creation is mutex-guarded, execution is
// concurrency-safe), so fields can be processed from several threads at once.

ModeCoeffs to_modes(const RealField& f);
RealField to_values(const ModeCoeffs& m);

/// Spectral derivative of the given order (>= 1). The Nyquist coefficient is
/// zeroed for odd orders.
RealField deriv(const RealField& f, int order);
void deriv_inplace(ModeCoeffs& m, int order);

struct Antideriv {
    RealField field;  ///< zero-mean antiderivative of f - mean(f)
    double mean;      ///< mean of the integrand, reported for diagnostics
};

/// Zero-mean-gauge antiderivative: deriv(result.field, 1) == f - mean(f).
Antideriv antideriv_zero_mean(const RealField& f);

/// 2/3-rule truncation: zeroes every mode with |k| > (2/3) * k_max. Idempotent.
ModeCoeffs dealias(const ModeCoeffs& m);
void dealias_inplace(ModeCoeffs& m);
RealField dealias(const RealField& f);

/// Pointwise product of the truncated inputs, truncated again afterwards, so
/// the retained band is free of quadratic aliasing.
RealField dealiased_product(const RealField& f, const RealField& g);

struct Norms {
    double l2;
    double linf;
    double mean;
};

Norms norms(const RealField& f);
double l2_norm(const RealField& f);
double linf_norm(const RealField& f);
double mean_value(const RealField& f);

/// Spectral quadrature of f over the box (spacing * sum of samples).
double integral(const RealField& f);

/// Trigonometric interpolation of the series at an arbitrary point x
/// (wrapped periodically into [0, L)).
double eval_interp(const ModeCoeffs& m, double x);

}  // namespace iaw

#endif
