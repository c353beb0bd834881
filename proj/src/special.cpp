#include "wavesrc/special.hpp"

#include <cmath>
#include <limits>

namespace wavesrc::special {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesSwitch = 14.0;

// Power-series evaluation of J0, Y0, J1, Y1 at complex z, |z| <= ~14.
// Terms peak around 3e4 there, so ~4-5 digits are lost to cancellation,
// leaving ~1e-11 relative accuracy in double.
struct SmallZ {
  cdouble j0, y0, j1, y1;
};

SmallZ series_small(cdouble z) {
  const cdouble q = -0.25 * z * z; // (-z^2/4)
  const cdouble logfac = std::log(0.5 * z) + kEulerGamma;

  // J0 = sum q^k/(k!)^2 ;  Y0-tail = sum_{k>=1} (-1)^{k+1} H_k (z^2/4)^k/(k!)^2
  // written with q: (z^2/4)^k (-1)^{k+1} = -q^k.
  cdouble term{1.0, 0.0};
  cdouble j0 = term, y0tail = 0.0;
  double hk = 0.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / static_cast<double>(k * k);
    hk += 1.0 / k;
    j0 += term;
    y0tail -= hk * term;
    if (std::abs(term) < 1e-18 * (std::abs(j0) + 1.0)) break;
  }
  const cdouble y0 = (2.0 / kPi) * (logfac * j0 + y0tail);

  // J1 = (z/2) sum q^k/(k!(k+1)!) ; Y1 per DLMF 10.8.1 rearranged around
  // (log(z/2)+gamma).
  term = cdouble{1.0, 0.0};
  cdouble s1 = term;        // sum q^k/(k!(k+1)!)
  cdouble s2 = term;        // sum (H_k + H_{k+1}) q^k/(k!(k+1)!), H_0 = 0
  hk = 0.0;
  double hk1 = 1.0;
  s2 = (hk + hk1) * term;
  for (int k = 1; k < 80; ++k) {
    term *= q / static_cast<double>(k * (k + 1));
    hk += 1.0 / k;
    hk1 += 1.0 / (k + 1);
    s1 += term;
    s2 += (hk + hk1) * term;
    if (std::abs(term) < 1e-18 * (std::abs(s1) + 1.0)) break;
  }
  const cdouble j1 = 0.5 * z * s1;
  const cdouble y1 =
      (2.0 / kPi) * (logfac * j1 - 1.0 / z - 0.25 * z * s2);
  return {j0, y0, j1, y1};
}

// Hankel asymptotic expansion, DLMF 10.17.5/10.17.6, summed to the smallest
// term. mu = 4*nu^2.
cdouble hankel_asymptotic(cdouble z, int nu) {
  const double mu = 4.0 * nu * nu;
  cdouble sum{1.0, 0.0};
  cdouble term{1.0, 0.0};
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= kI * (mu - odd * odd) / (8.0 * k) / z;
    const double mag = std::abs(term);
    if (mag >= prev) break; // divergent tail reached
    sum += term;
    if (mag < 1e-17) break;
    prev = mag;
  }
  const cdouble phase = z - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * z)) * std::exp(kI * phase) * sum;
}

} // namespace

cdouble hankel1_0(cdouble z) {
  if (z == cdouble{0.0, 0.0})
    throw DomainError("hankel1_0: logarithmic singularity at z = 0");
  if (std::abs(z) <= kSeriesSwitch) {
    const SmallZ s = series_small(z);
    return s.j0 + kI * s.y0;
  }
  return hankel_asymptotic(z, 0);
}

cdouble hankel1_1(cdouble z) {
  if (z == cdouble{0.0, 0.0})
    throw DomainError("hankel1_1: singular at z = 0");
  if (std::abs(z) <= kSeriesSwitch) {
    const SmallZ s = series_small(z);
    return s.j1 + kI * s.y1;
  }
  return hankel_asymptotic(z, 1);
}

double bessel_j0(double x) { return hankel1_0(cdouble{x, 0.0}).real(); }
double bessel_y0(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y0: requires x > 0");
  return hankel1_0(cdouble{x, 0.0}).imag();
}
double bessel_j1(double x) { return hankel1_1(cdouble{x, 0.0}).real(); }
double bessel_y1(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_y1: requires x > 0");
  return hankel1_1(cdouble{x, 0.0}).imag();
}

double bessel_i0(double t) {
  const double q = 0.25 * t * t;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double bessel_k0(double t) {
  if (!(t > 0.0)) throw DomainError("bessel_k0: requires t > 0");
  if (t <= 10.5) {
    // The log * I0 and harmonic-tail pieces cancel to ~e^{-2t} of their size,
    // so accumulate in extended precision; worst case ~1e-9 relative at the
    // switch point.
    const long double q = 0.25L * static_cast<long double>(t) * t;
    long double term = 1.0L, hk = 0.0L, tail = 0.0L, i0 = 1.0L;
    for (int k = 1; k < 100; ++k) {
      term *= q / (static_cast<long double>(k) * k);
      hk += 1.0L / k;
      tail += hk * term;
      i0 += term;
      if (term < 1e-22L) break;
    }
    const long double lg = std::log(0.5L * static_cast<long double>(t)) +
                           static_cast<long double>(kEulerGamma);
    return static_cast<double>(-lg * i0 + tail);
  }
  // K0(t) ~ sqrt(pi/2t) e^{-t} sum (-1)^k ((2k-1)!!)^2 / (k! (8t)^k)
  double sum = 1.0, term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(odd * odd) / (8.0 * k * t);
    const double mag = std::fabs(term);
    if (mag >= prev) break;
    sum += term;
    if (mag < 1e-17) break;
    prev = mag;
  }
  return std::sqrt(kPi / (2.0 * t)) * std::exp(-t) * sum;
}

} // namespace wavesrc::special
