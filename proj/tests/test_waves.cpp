#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "wavesrc/special.hpp"
#include "wavesrc/waves.hpp"

using wavesrc::cdouble;
using wavesrc::kPi;
using wavesrc::Point;
namespace wv = wavesrc::waves;

namespace {
double dist(const Point& x, const Point& y, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}
} // namespace

TEST_CASE("radiation constants") {
  const cdouble c2 = wv::radiation_constant(2);
  CHECK(std::abs(c2 - std::polar(1.0 / std::sqrt(8.0 * kPi), kPi / 4.0)) < 1e-15);
  const cdouble c3 = wv::radiation_constant(3);
  CHECK(c3.real() == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-15));
  CHECK(c3.imag() == 0.0);
}

TEST_CASE("helmholtz kernel closed forms") {
  const Point x{0.31, 0.77, 0.12}, y{0.9, 0.2, 0.65};
  const double kappa = 5.0;

  const double r3 = dist(x, y, 3);
  const cdouble phi3 = wv::fundamental_helmholtz(x, y, kappa, 3);
  CHECK(std::abs(phi3 - std::exp(cdouble(0, kappa * r3)) / (4.0 * kPi * r3)) <
        1e-15);

  const double r2 = dist(x, y, 2);
  const cdouble phi2 = wv::fundamental_helmholtz(x, y, kappa, 2);
  const cdouble want2 =
      cdouble(0, 0.25) * wavesrc::special::hankel1_0(kappa * r2);
  CHECK(std::abs(phi2 - want2) < 1e-12 * std::abs(want2));
}

TEST_CASE("helmholtz kernel at imaginary wavenumber is evanescent") {
  const Point x{0.1, 0.4, 0.0}, y{0.8, 0.9, 0.0};
  const double t = 4.0;
  const double r2 = dist(x, y, 2);
  const cdouble got2 = wv::fundamental_helmholtz(x, y, cdouble(0.0, t), 2);
  const double want2 = wavesrc::special::bessel_k0(t * r2) / (2.0 * kPi);
  CHECK(std::abs(got2 - want2) < 1e-8 * want2);
  CHECK(std::abs(got2.imag()) < 1e-14);

  const Point x3{0.1, 0.4, 0.3}, y3{0.8, 0.9, 0.7};
  const double r3 = dist(x3, y3, 3);
  const cdouble got3 = wv::fundamental_helmholtz(x3, y3, cdouble(0.0, t), 3);
  CHECK(std::abs(got3 - std::exp(-t * r3) / (4.0 * kPi * r3)) < 1e-14);
}

TEST_CASE("biharmonic kernel equals its defining combination") {
  const double kappa = 3.0;
  for (int d : {2, 3}) {
    const Point x{0.2, 0.6, 0.1}, y{0.75, 0.15, 0.55};
    const cdouble f = wv::fundamental_biharmonic(x, y, kappa, d);
    const cdouble want = (wv::fundamental_helmholtz(x, y, kappa, d) -
                          wv::fundamental_helmholtz(x, y, cdouble(0, kappa), d)) /
                         (2.0 * kappa * kappa);
    CHECK(std::abs(f - want) < 1e-8 * std::abs(want));
  }
}

TEST_CASE("biharmonic kernel is continuous through the small-r series branch") {
  const double kappa = 2.0;
  const double wavelength = 2.0 * kPi / kappa;
  for (int d : {2, 3}) {
    const Point y{0.0, 0.0, 0.0};
    // Straddle the 1e-6 * wavelength series threshold.
    Point xa{2.0e-6 * wavelength, 0.0, 0.0};
    Point xb{0.5e-6 * wavelength, 0.0, 0.0};
    const cdouble a = wv::fundamental_biharmonic(xa, y, kappa, d);
    const cdouble b = wv::fundamental_biharmonic(xb, y, kappa, d);
    CHECK(std::abs(a - b) < 1e-5 * std::abs(a));
    if (d == 3) {
      // r -> 0 limit of (e^{i k r} - e^{-k r}) / (8 pi r k^2) is (1+i)/(8 pi k).
      const cdouble limit = cdouble(1.0, 1.0) / (8.0 * kPi * kappa);
      CHECK(std::abs(b - limit) < 1e-5 * std::abs(limit));
    }
  }
}

TEST_CASE("elastic green tensor satisfies the navier equation off the source") {
  const double lambda = 1.3, mu = 0.8, omega = 3.0;
  const wv::ElasticSpeeds sp(lambda, mu);
  const double fd = 1e-3;
  for (int d : {2, 3}) {
    const Point y{0.0, 0.0, 0.0};
    Point x{0.9, 0.5, 0.0};
    if (d == 3) x[2] = 0.4;

    auto tensor = [&](Point p) { return wv::green_tensor_elastic(p, y, omega, sp, d); };
    const Eigen::MatrixXcd g0 = tensor(x);
    CHECK(g0.rows() == d);
    // Symmetry in the component indices.
    CHECK((g0 - g0.transpose()).norm() < 1e-12 * g0.norm());

    // mu lap G + (lambda + mu) grad div G + omega^2 G = 0, columnwise, via
    // central differences. O(fd^2) residual against the tensor scale.
    Eigen::MatrixXcd lap = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd graddiv = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      Point xp = x, xm = x;
      xp[i] += fd;
      xm[i] -= fd;
      lap += (tensor(xp) + tensor(xm) - 2.0 * g0) / (fd * fd);
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        // d_i d_j G(j, l) summed over j: assemble per entry below.
        Point xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += fd; xpp[j] += fd;
        xpm[i] += fd; xpm[j] -= fd;
        xmp[i] -= fd; xmp[j] += fd;
        xmm[i] -= fd; xmm[j] -= fd;
        const Eigen::MatrixXcd mixed =
            (tensor(xpp) - tensor(xpm) - tensor(xmp) + tensor(xmm)) /
            (4.0 * fd * fd);
        graddiv.row(i) += mixed.row(j);
      }
    }
    const Eigen::MatrixXcd resid =
        mu * lap + (lambda + mu) * graddiv + omega * omega * g0;
    CHECK(resid.norm() < 5e-4 * (omega * omega * g0.norm()));
  }
}

TEST_CASE("far-field prefactors") {
  const double kappa = 4.0;
  // Acoustic: -C_d kappa^{(d-3)/2}.
  for (int d : {2, 3}) {
    const auto p = wv::farfield_prefactor(wv::WaveKind::acoustic(), d, kappa);
    const cdouble want =
        -wv::radiation_constant(d) * std::pow(kappa, 0.5 * (d - 3));
    CHECK(std::abs(p.primary - want) < 1e-15 * std::abs(want));
    CHECK(p.kappa_power == 0.5 * (d - 3));
    CHECK(!p.has_pair);
  }
  // Biharmonic: -(C_d / 2) kappa^{(d-7)/2}.
  for (int d : {2, 3}) {
    const auto p = wv::farfield_prefactor(wv::WaveKind::biharmonic(), d, kappa);
    const cdouble want =
        -0.5 * wv::radiation_constant(d) * std::pow(kappa, 0.5 * (d - 7));
    CHECK(std::abs(p.primary - want) < 1e-15 * std::abs(want));
    CHECK(p.kappa_power == 0.5 * (d - 7));
  }
  // Electromagnetic (d = 3 only): i kappa C_3.
  {
    const auto p = wv::farfield_prefactor(wv::WaveKind::electromagnetic(), 3, kappa);
    const cdouble want = cdouble(0, 1) * kappa * wv::radiation_constant(3);
    CHECK(std::abs(p.primary - want) < 1e-15 * std::abs(want));
    CHECK(p.kappa_power == 1.0);
  }
  // Elastic: pair with the compressional/shear wavenumbers.
  for (int d : {2, 3}) {
    const wv::ElasticSpeeds sp(0.0, 1.0); // c_p = 2^{-1/2}, c_s = 1
    const auto p =
        wv::farfield_prefactor(wv::WaveKind::elastic(0.0, 1.0), d, kappa);
    CHECK(p.has_pair);
    const double kp = sp.kappa_p(kappa), ks = sp.kappa_s(kappa);
    const cdouble want_p = -sp.c_p * sp.c_p * wv::radiation_constant(d) *
                           std::pow(kp, 0.5 * (d - 3));
    const cdouble want_s = -sp.c_s * sp.c_s * wv::radiation_constant(d) *
                           std::pow(ks, 0.5 * (d - 3));
    CHECK(std::abs(p.primary - want_p) < 1e-14 * std::abs(want_p));
    CHECK(std::abs(p.secondary - want_s) < 1e-14 * std::abs(want_s));
  }
}

TEST_CASE("radial derivatives match finite differences") {
  const double kappa = 3.0, r = 0.7, fd = 1e-5;
  for (int d : {2, 3}) {
    const auto rd = wv::helmholtz_radial_derivs(r, kappa, d);
    const Point y{0.0, 0.0, 0.0};
    auto phi = [&](double rr) {
      Point x{rr, 0.0, 0.0};
      return wv::fundamental_helmholtz(x, y, kappa, d);
    };
    CHECK(std::abs(rd.value - phi(r)) < 1e-12 * std::abs(rd.value));
    const cdouble d1 = (phi(r + fd) - phi(r - fd)) / (2.0 * fd);
    const cdouble d2 = (phi(r + fd) + phi(r - fd) - 2.0 * phi(r)) / (fd * fd);
    CHECK(std::abs(rd.d1 - d1) < 1e-7 * std::abs(d1));
    CHECK(std::abs(rd.d2 - d2) < 1e-4 * std::abs(d2));
  }
}

TEST_CASE("model names round-trip") {
  for (auto m : {wv::Model::Acoustic, wv::Model::Biharmonic,
                 wv::Model::Electromagnetic, wv::Model::Elastic}) {
    CHECK(wv::model_from_name(wv::model_name(m)) == m);
  }
  CHECK_THROWS_AS(wv::model_from_name("scalar"), wavesrc::ConfigError);
}

TEST_CASE("elastic parameter validation") {
  CHECK_THROWS_AS(wv::WaveKind::elastic(0.0, 0.0), wavesrc::ConfigError);
  CHECK_THROWS_AS(wv::WaveKind::elastic(-3.0, 1.0), wavesrc::ConfigError);
  CHECK_NOTHROW(wv::WaveKind::elastic(-1.0, 1.0));
}
