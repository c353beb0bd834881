#ifndef WAVESRC_SPECIAL_HPP
#define WAVESRC_SPECIAL_HPP

#include "wavesrc/common.hpp"

namespace wavesrc::special {

/// Hankel functions of the first kind, order 0 and 1, for complex z with
/// Im(z) >= 0 on the principal branch. Power series up to |z| = 14, Hankel
/// asymptotic expansion beyond; both branches agree to ~1e-11 at the switch.
cdouble hankel1_0(cdouble z);
cdouble hankel1_1(cdouble z);

/// Bessel J/Y of order 0 and 1 for real positive x (real parts of the above).
double bessel_j0(double x);
double bessel_y0(double x);
double bessel_j1(double x);
double bessel_y1(double x);

/// Modified Bessel functions for real t > 0. K0 backs the imaginary-argument
/// Helmholtz kernel without touching the H0 branch cut.
double bessel_i0(double t);
double bessel_k0(double t);

} // namespace wavesrc::special

#endif
