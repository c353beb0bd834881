#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "wavesrc/forward.hpp"
#include "wavesrc/oracle.hpp"

using wavesrc::cdouble;
using wavesrc::Grid;
using wavesrc::kPi;
using wavesrc::Point;
namespace fw = wavesrc::forward;
namespace gm = wavesrc::gmig;
namespace wv = wavesrc::waves;

namespace {

// Deterministic synthetic complex field, compactly supported bump times an
// oscillation; no sampler involved so failures localize to the transforms.
gm::FieldRealization synthetic_field(const Grid& grid, int ncomp) {
  gm::FieldRealization f;
  f.grid = grid;
  f.ncomp = ncomp;
  f.values.assign(grid.node_count() * ncomp, cdouble(0.0, 0.0));
  const double w = 0.1 * grid.length;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const auto p = grid.node(i);
    double q = 0.0;
    for (int a = 0; a < grid.d; ++a) {
      const double dx = p[a] - 0.5 * grid.length;
      q += dx * dx;
    }
    const double bump = std::exp(-q / (2.0 * w * w));
    for (int c = 0; c < ncomp; ++c) {
      f.values[i * ncomp + c] =
          bump * std::polar(1.0 + 0.3 * c, 5.0 * p[0] - 3.0 * p[1] + c);
    }
  }
  return f;
}

} // namespace

TEST_CASE("direction sets") {
  const auto circ = fw::DirectionSet::circle(8);
  CHECK(circ.size() == 8);
  CHECK(circ.negation_closed());
  for (const auto& x : circ.directions)
    CHECK(wavesrc::norm(x, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(!fw::DirectionSet::circle(7).negation_closed());

  const auto sph = fw::DirectionSet::sphere_pairs(6);
  CHECK(sph.size() == 12);
  CHECK(sph.negation_closed());
  for (const auto& x : sph.directions)
    CHECK(wavesrc::norm(x, 3) == doctest::Approx(1.0).epsilon(1e-12));
  const auto ni = sph.negation_index(3);
  REQUIRE(ni.has_value());
  for (int a = 0; a < 3; ++a)
    CHECK(sph.directions[*ni][a] == doctest::Approx(-sph.directions[3][a]));

  CHECK_THROWS_AS(fw::DirectionSet::from_vectors(2, {Point{0.5, 0.5, 0.0}}),
                  wavesrc::ConfigError);
}

TEST_CASE("frequency band lattice") {
  const fw::FrequencyBand band(2.0, 0.5);
  const auto nodes = band.nodes();
  REQUIRE(nodes.size() == 5);
  CHECK(nodes.front() == 2.0);
  CHECK(nodes.back() == 4.0);
  CHECK(band.max_frequency() == 4.0);
  // Step must divide Q.
  CHECK_THROWS_AS(fw::FrequencyBand(2.0, 0.3), wavesrc::ConfigError);
}

TEST_CASE("nyquist budget and transform refusal") {
  const Grid grid(2, 16, 1.0); // h = 1/16, nyquist = 16 pi, budget = 8 pi
  CHECK_NOTHROW(fw::check_frequency_budget(grid, 8.0 * kPi - 1e-9));
  CHECK_THROWS_AS(fw::check_frequency_budget(grid, 8.0 * kPi + 1e-6),
                  wavesrc::ConfigError);

  const auto f = synthetic_field(grid, 1);
  const Point xi_bad{17.0 * kPi, 0.0, 0.0};
  CHECK_THROWS_AS(fw::source_fourier(f, xi_bad), wavesrc::ConfigError);
}

TEST_CASE("ray-batched transform equals the direct transform") {
  for (int d : {2, 3}) {
    const Grid grid(d, 16, 1.0);
    const auto f = synthetic_field(grid, d == 2 ? 1 : 2);
    const Point xhat =
        d == 2 ? Point{0.6, 0.8, 0.0} : Point{0.48, 0.6, 0.64};
    const std::vector<double> kappas{1.0, 4.0, 9.5, 15.75};
    const auto batch = fw::source_fourier_ray(f, xhat, kappas);
    REQUIRE(batch.rows() == f.ncomp);
    REQUIRE(batch.cols() == static_cast<Eigen::Index>(kappas.size()));
    for (std::size_t l = 0; l < kappas.size(); ++l) {
      Point xi{0, 0, 0};
      for (int a = 0; a < d; ++a) xi[a] = kappas[l] * xhat[a];
      const auto direct = fw::source_fourier(f, xi);
      for (int c = 0; c < f.ncomp; ++c)
        CHECK(std::abs(batch(c, l) - direct(c)) <
              1e-12 * (1.0 + std::abs(direct(c))));
    }
  }
}

TEST_CASE("batch far fields equal brute-force summation, all wave kinds") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> ufreq(1.0, 12.0);

  const Grid grid(2, 16, 1.0);
  const auto scalar = synthetic_field(grid, 1);
  const auto vec = synthetic_field(grid, 2);

  const std::vector<wv::WaveKind> kinds{
      wv::WaveKind::acoustic(), wv::WaveKind::biharmonic(),
      wv::WaveKind::elastic(0.5, 1.0)};
  for (const auto& kind : kinds) {
    const auto& f = kind.is_vector() ? vec : scalar;
    for (int probe = 0; probe < 50; ++probe) {
      const double ang = uang(rng);
      const Point xhat{std::cos(ang), std::sin(ang), 0.0};
      const double freq = ufreq(rng);
      const auto rec = fw::farfield(kind, f, xhat, freq);
      Eigen::VectorXcd sec;
      const auto want =
          wavesrc::oracle::brute_force_farfield(kind, f, xhat, freq, &sec);
      CHECK((rec.value - want).norm() < 1e-8 * (1.0 + want.norm()));
      if (kind.model == wv::Model::Elastic)
        CHECK((rec.secondary - sec).norm() < 1e-8 * (1.0 + sec.norm()));
    }
  }

  // Electromagnetic needs d = 3.
  const Grid grid3(3, 16, 1.0);
  const auto vec3 = synthetic_field(grid3, 3);
  std::uniform_real_distribution<double> uz(-1.0, 1.0);
  for (int probe = 0; probe < 50; ++probe) {
    const double z = uz(rng), ang = uang(rng);
    const double rho = std::sqrt(1.0 - z * z);
    const Point xhat{rho * std::cos(ang), rho * std::sin(ang), z};
    const double freq = ufreq(rng);
    const auto rec = fw::farfield(wv::WaveKind::electromagnetic(), vec3, xhat, freq);
    const auto want = wavesrc::oracle::brute_force_farfield(
        wv::WaveKind::electromagnetic(), vec3, xhat, freq);
    CHECK((rec.value - want).norm() < 1e-8 * (1.0 + want.norm()));
  }
}

TEST_CASE("farfield_batch agrees with single evaluations") {
  const Grid grid(2, 16, 1.0);
  const auto f = synthetic_field(grid, 1);
  const auto dirs = fw::DirectionSet::circle(6);
  const std::vector<double> freqs{2.0, 5.0, 11.0};
  const auto records =
      fw::farfield_batch(wv::WaveKind::acoustic(), f, dirs, freqs);
  REQUIRE(records.size() == dirs.size() * freqs.size());
  for (const auto& rec : records) {
    const auto single =
        fw::farfield(wv::WaveKind::acoustic(), f, rec.direction, rec.frequency);
    CHECK((rec.value - single.value).norm() < 1e-13);
  }
}

TEST_CASE("biharmonic over acoustic ratio is 1/(2 kappa^2)") {
  for (int d : {2, 3}) {
    const Grid grid(d, 16, 1.0);
    const auto f = synthetic_field(grid, 1);
    const Point xhat = d == 2 ? Point{1.0, 0.0, 0.0} : Point{0.0, 0.6, 0.8};
    for (double kappa : {1.5, 6.0, 12.0}) {
      const auto ua = fw::farfield(wv::WaveKind::acoustic(), f, xhat, kappa);
      const auto ub = fw::farfield(wv::WaveKind::biharmonic(), f, xhat, kappa);
      const cdouble ratio = ub.value(0) / ua.value(0);
      CHECK(std::abs(ratio - 1.0 / (2.0 * kappa * kappa)) <
            1e-14 / (kappa * kappa));
    }
  }
}

TEST_CASE("elastic polarization identities") {
  const Grid grid(2, 16, 1.0);
  const auto f = synthetic_field(grid, 2);
  const auto kind = wv::WaveKind::elastic(0.7, 1.2);
  for (double ang : {0.3, 1.1, 2.9, 4.4}) {
    const Point xhat{std::cos(ang), std::sin(ang), 0.0};
    const auto rec = fw::farfield(kind, f, xhat, 7.0);
    // Compressional part parallel to xhat, shear part orthogonal.
    const cdouble cross = rec.value(0) * xhat[1] - rec.value(1) * xhat[0];
    CHECK(std::abs(cross) < 1e-12 * rec.value.norm());
    const cdouble along = rec.secondary(0) * xhat[0] + rec.secondary(1) * xhat[1];
    CHECK(std::abs(along) < 1e-12 * (1.0 + rec.secondary.norm()));
  }
}

TEST_CASE("real fields have conjugate-symmetric transforms") {
  const Grid grid(2, 16, 1.0);
  gm::FieldRealization f = synthetic_field(grid, 1);
  for (auto& v : f.values) v = v.real(); // strip to a real field
  const Point xi{7.0, -4.0, 0.0};
  const Point mxi{-7.0, 4.0, 0.0};
  const auto a = fw::source_fourier(f, xi);
  const auto b = fw::source_fourier(f, mxi);
  CHECK(std::abs(a(0) - std::conj(b(0))) < 1e-13);
}

TEST_CASE("near-field potential: exterior-point checks") {
  const Grid grid(2, 16, 1.0);
  const auto f = synthetic_field(grid, 1);
  const double kappa = 3.0;

  // Too close to the support box.
  CHECK_THROWS_AS(
      fw::nearfield(wv::WaveKind::acoustic(), f, Point{1.01, 0.5, 0.0}, kappa),
      wavesrc::DomainError);

  // Independent direct quadrature of -int Phi f.
  const Point x{3.0, 1.0, 0.0};
  const auto got = fw::nearfield(wv::WaveKind::acoustic(), f, x, kappa);
  cdouble want(0.0, 0.0);
  const double hvol = grid.spacing() * grid.spacing();
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    want -= hvol * wv::fundamental_helmholtz(x, grid.node(i), kappa, 2) *
            f.values[i];
  }
  CHECK(std::abs(got(0) - want) < 1e-10 * std::abs(want));
}
