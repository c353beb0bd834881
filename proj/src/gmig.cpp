#include "wavesrc/gmig.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wavesrc/fft.hpp"
#include "wavesrc/rng.hpp"

namespace wavesrc::gmig {

namespace {

void check_order(const Grid& grid, double m) {
  if (!(m > grid.d - 6.0 && m < grid.d + 2.0)) {
    std::ostringstream os;
    os << "order m = " << m << " outside the sampler range (d-6, d+2) = ("
       << grid.d - 6.0 << ", " << grid.d + 2.0 << ")";
    throw ConfigError(os.str());
  }
}

/// Iterate the frequency lattice in flat order, giving |xi| per bin.
template <typename F>
void for_each_frequency(const Grid& grid, F&& fn) {
  const int n = grid.n;
  std::size_t flat = 0;
  if (grid.d == 2) {
    for (int i = 0; i < n; ++i) {
      const double xi0 = grid.bin_frequency(i);
      for (int j = 0; j < n; ++j, ++flat) {
        const double xi1 = grid.bin_frequency(j);
        fn(flat, std::sqrt(xi0 * xi0 + xi1 * xi1));
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double xi0 = grid.bin_frequency(i);
      for (int j = 0; j < n; ++j) {
        const double xi1 = grid.bin_frequency(j);
        for (int k = 0; k < n; ++k, ++flat) {
          const double xi2 = grid.bin_frequency(k);
          fn(flat, std::sqrt(xi0 * xi0 + xi1 * xi1 + xi2 * xi2));
        }
      }
    }
  }
}

/// Complex stationary field with E[g conj g'] = G(x-y); Re,Im parts are
/// independent with covariance G/2 each.
std::vector<cdouble> colored_noise(const Grid& grid, double m, double delta,
                                   std::uint64_t stream_seed) {
  const double inv_vol = 1.0 / std::pow(grid.length, grid.d);
  NormalStream stream(stream_seed);
  std::vector<cdouble> spec(grid.node_count());
  for (auto& v : spec) v = stream.next_complex_unit();
  for_each_frequency(grid, [&](std::size_t flat, double xi) {
    spec[flat] *= std::sqrt(spectral_density(m, delta, xi) * inv_vol);
  });
  fft::backward(grid, spec);
  return spec;
}

bool within_support_margin(const Grid& grid, std::size_t flat, int margin_cells) {
  const Point p = grid.node(flat);
  const double h = grid.spacing();
  for (int a = 0; a < grid.d; ++a) {
    if (p[a] < margin_cells * h - 0.5 * h ||
        p[a] > grid.length - margin_cells * h + 0.5 * h)
      return true;
  }
  return false;
}

} // namespace

Eigen::MatrixXcd MatrixStrengthPair::at_c(std::size_t node) const {
  const int d = grid.d;
  return Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      a_c.data() + node * d * d, d, d);
}

Eigen::MatrixXcd MatrixStrengthPair::at_r(std::size_t node) const {
  const int d = grid.d;
  return Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      a_r.data() + node * d * d, d, d);
}

double spectral_density(double m, double delta, double xi_norm) {
  if (!(delta > 0.0)) throw ConfigError("spectral_density: delta must be positive");
  return std::pow(xi_norm * xi_norm + delta * delta, -0.5 * m);
}

double stationary_variance(const Grid& grid, double m, double delta) {
  double sum = 0.0;
  for_each_frequency(grid, [&](std::size_t, double xi) {
    sum += spectral_density(m, delta, xi);
  });
  return sum / std::pow(grid.length, grid.d);
}

StationaryPair sample_stationary_pair(const Grid& grid, double m, double delta,
                                      std::uint64_t seed) {
  check_order(grid, m);
  const auto gc = colored_noise(grid, m, delta, split_seed(seed, stage::kFieldNoise, 0));
  StationaryPair out;
  out.g1.resize(gc.size());
  out.g2.resize(gc.size());
  const double s = std::sqrt(2.0);
  for (std::size_t i = 0; i < gc.size(); ++i) {
    out.g1[i] = s * gc[i].real();
    out.g2[i] = s * gc[i].imag();
  }
  return out;
}

StrengthReport validate_strengths(const ScalarStrengthPair& s) {
  StrengthReport rep;
  const std::size_t nn = s.grid.node_count();
  if (s.a_c.size() != nn || s.a_r.size() != nn)
    throw ConfigError("validate_strengths: grid/strength size mismatch");
  double amax = 0.0;
  for (double v : s.a_c) amax = std::max(amax, v);
  const double tol = 1e-12 * std::max(amax, 1.0);

  rep.min_margin = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < nn; ++i) {
    if (s.a_c[i] < -tol) {
      rep.pass = false;
      std::ostringstream os;
      os << "a_c negative at node " << i << " (" << s.a_c[i] << ")";
      rep.failure = os.str();
      rep.worst_node = i;
      return rep;
    }
    const double margin = s.a_c[i] - std::abs(s.a_r[i]);
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.worst_node = i;
    }
    if (margin < -tol) rep.pass = false;
    if (!rep.pass) {
      std::ostringstream os;
      os << "|a_r| > a_c at node " << rep.worst_node << " (margin " << margin << ")";
      rep.failure = os.str();
      return rep;
    }
    if (within_support_margin(s.grid, i, 4) &&
        (std::abs(s.a_c[i]) > tol || std::abs(s.a_r[i]) > tol)) {
      rep.support_margin_ok = false;
      rep.pass = false;
      std::ostringstream os;
      os << "strength nonzero inside the 4h boundary margin at node " << i;
      rep.failure = os.str();
      return rep;
    }
  }
  // Smoothness diagnostic: large relative jump between axis neighbors.
  const int n = s.grid.n;
  bool warned = false;
  for (std::size_t i = 0; i + 1 < nn && !warned; ++i) {
    if (static_cast<int>((i + 1) % n) == 0) continue; // axis wrap
    const double a = s.a_c[i], b = s.a_c[i + 1];
    if (std::max(a, b) > 0.01 * amax &&
        std::abs(a - b) > 0.5 * std::max(a, b)) {
      rep.warnings.push_back("a_c jumps by more than 50% between neighbor nodes");
      warned = true;
    }
  }
  return rep;
}

StrengthReport validate_strengths(const MatrixStrengthPair& s) {
  StrengthReport rep;
  const int d = s.grid.d;
  const std::size_t nn = s.grid.node_count();
  if (s.a_c.size() != nn * d * d || s.a_r.size() != nn * d * d)
    throw ConfigError("validate_strengths: grid/strength size mismatch");

  rep.min_margin = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < nn; ++i) {
    const Eigen::MatrixXcd ac = s.at_c(i);
    const Eigen::MatrixXcd ar = s.at_r(i);
    Eigen::MatrixXcd aug(2 * d, 2 * d);
    aug.topLeftCorner(d, d) = ac;
    aug.topRightCorner(d, d) = ar;
    aug.bottomLeftCorner(d, d) = ar.conjugate();
    aug.bottomRightCorner(d, d) = ac.conjugate();
    const double herm = (aug - aug.adjoint()).norm();
    const double tr = std::max(std::abs(aug.trace().real()), 1e-300);
    if (herm > 1e-8 * std::max(tr, 1.0)) {
      rep.pass = false;
      std::ostringstream os;
      os << "augmented matrix not Hermitian at node " << i
         << " (A_c must be Hermitian, A_r symmetric)";
      rep.failure = os.str();
      rep.worst_node = i;
      return rep;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(aug,
                                                       Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    if (lam < rep.min_margin) {
      rep.min_margin = lam;
      rep.worst_node = i;
    }
    if (lam < -kPsdTol * tr) {
      rep.pass = false;
      std::ostringstream os;
      os << "augmented matrix indefinite at node " << i << " (eigenvalue " << lam
         << ")";
      rep.failure = os.str();
      return rep;
    }
    if (within_support_margin(s.grid, i, 4) && aug.norm() > 1e-12) {
      rep.support_margin_ok = false;
      rep.pass = false;
      std::ostringstream os;
      os << "strength nonzero inside the 4h boundary margin at node " << i;
      rep.failure = os.str();
      return rep;
    }
  }
  return rep;
}

ScalarGmigSampler::ScalarGmigSampler(ScalarStrengthPair strengths, double delta)
    : strengths_(std::move(strengths)), delta_(delta) {
  check_order(strengths_.grid, strengths_.order_m);
  if (!(delta_ > 0.0)) throw ConfigError("ScalarGmigSampler: delta must be positive");
  const StrengthReport rep = validate_strengths(strengths_);
  if (!rep.pass) throw ConfigError("inadmissible strengths: " + rep.failure);

  const std::size_t nn = strengths_.grid.node_count();
  l11_.resize(nn);
  l21_.resize(nn);
  l22_.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double m11 = 0.5 * (strengths_.a_c[i] + strengths_.a_r[i].real());
    const double m12 = 0.5 * strengths_.a_r[i].imag();
    const double m22 = 0.5 * (strengths_.a_c[i] - strengths_.a_r[i].real());
    const double l11 = std::sqrt(std::max(m11, 0.0));
    const double l21 = (l11 > 0.0) ? m12 / l11 : 0.0;
    const double l22 = std::sqrt(std::max(m22 - l21 * l21, 0.0));
    l11_[i] = l11;
    l21_[i] = l21;
    l22_[i] = l22;
  }
}

FieldRealization ScalarGmigSampler::sample(std::uint64_t seed) const {
  const Grid& grid = strengths_.grid;
  const auto gc =
      colored_noise(grid, strengths_.order_m, delta_, split_seed(seed, stage::kFieldNoise, 0));
  FieldRealization out;
  out.grid = grid;
  out.ncomp = 1;
  out.order_m = strengths_.order_m;
  out.delta = delta_;
  out.seed = seed;
  out.values.resize(grid.node_count());
  const double s = std::sqrt(2.0);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double g1 = s * gc[i].real();
    const double g2 = s * gc[i].imag();
    out.values[i] = cdouble{l11_[i] * g1, l21_[i] * g1 + l22_[i] * g2};
  }
  return out;
}

Eigen::MatrixXd real_covariance_from_strengths(const Eigen::MatrixXcd& a_c,
                                               const Eigen::MatrixXcd& a_r) {
  const int d = static_cast<int>(a_c.rows());
  Eigen::MatrixXd cov(2 * d, 2 * d);
  cov.topLeftCorner(d, d) = 0.5 * (a_c + a_r).real();
  cov.bottomRightCorner(d, d) = 0.5 * (a_c - a_r).real();
  cov.topRightCorner(d, d) = 0.5 * (a_r - a_c).imag();
  cov.bottomLeftCorner(d, d) = 0.5 * (a_c + a_r).imag();
  return 0.5 * (cov + cov.transpose()); // round-off symmetrization
}

VectorGmigSampler::VectorGmigSampler(MatrixStrengthPair strengths, double delta)
    : strengths_(std::move(strengths)), delta_(delta) {
  check_order(strengths_.grid, strengths_.order_m);
  if (!(delta_ > 0.0)) throw ConfigError("VectorGmigSampler: delta must be positive");
  const StrengthReport rep = validate_strengths(strengths_);
  if (!rep.pass) throw ConfigError("inadmissible strengths: " + rep.failure);

  const int d = strengths_.grid.d;
  const int w = 2 * d;
  const std::size_t nn = strengths_.grid.node_count();
  factors_.assign(nn * w * w, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    const Eigen::MatrixXd cov =
        real_covariance_from_strengths(strengths_.at_c(i), strengths_.at_r(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const double tr = std::max(cov.trace(), 1e-300);
    Eigen::VectorXd lam = es.eigenvalues();
    for (int k = 0; k < w; ++k) {
      if (lam(k) < -kPsdTol * tr) {
        std::ostringstream os;
        os << "real covariance indefinite at node " << i << " (eigenvalue "
           << lam(k) << ")";
        throw ConfigError(os.str());
      }
      lam(k) = std::sqrt(std::max(lam(k), 0.0));
    }
    const Eigen::MatrixXd fac =
        es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    Eigen::Map<Eigen::MatrixXd>(factors_.data() + i * w * w, w, w) = fac;
  }
}

Eigen::MatrixXd VectorGmigSampler::factor(std::size_t node) const {
  const int w = 2 * strengths_.grid.d;
  return Eigen::Map<const Eigen::MatrixXd>(factors_.data() + node * w * w, w, w);
}

FieldRealization VectorGmigSampler::sample(std::uint64_t seed) const {
  const Grid& grid = strengths_.grid;
  const int d = grid.d;
  const int w = 2 * d;
  const std::size_t nn = grid.node_count();

  // d complex colored-noise fields supply 2d independent real fields.
  std::vector<std::vector<cdouble>> gc(d);
  for (int c = 0; c < d; ++c)
    gc[c] = colored_noise(grid, strengths_.order_m, delta_,
                          split_seed(seed, stage::kFieldNoise, c));

  FieldRealization out;
  out.grid = grid;
  out.ncomp = d;
  out.order_m = strengths_.order_m;
  out.delta = delta_;
  out.seed = seed;
  out.values.resize(nn * d);

  const double s = std::sqrt(2.0);
  Eigen::VectorXd g(w);
  for (std::size_t i = 0; i < nn; ++i) {
    for (int c = 0; c < d; ++c) {
      g(2 * c) = s * gc[c][i].real();
      g(2 * c + 1) = s * gc[c][i].imag();
    }
    const Eigen::Map<const Eigen::MatrixXd> fac(factors_.data() + i * w * w, w, w);
    const Eigen::VectorXd z = fac * g;
    for (int c = 0; c < d; ++c)
      out.values[i * d + c] = cdouble{z(c), z(d + c)};
  }
  return out;
}

FieldRealization sample_scalar_gmig(const ScalarStrengthPair& strengths,
                                    double delta, std::uint64_t seed) {
  return ScalarGmigSampler(strengths, delta).sample(seed);
}

FieldRealization sample_vector_gmig(const MatrixStrengthPair& strengths,
                                    double delta, std::uint64_t seed) {
  return VectorGmigSampler(strengths, delta).sample(seed);
}

} // namespace wavesrc::gmig
