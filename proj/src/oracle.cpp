#include "wavesrc/oracle.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "wavesrc/rng.hpp"

namespace wavesrc::oracle {

namespace {

/// Standard normals by the Marsaglia polar method; a different algorithm from
/// the production stream on purpose.
class PolarNormal {
public:
  explicit PolarNormal(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

private:
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1p-53;
  }
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

void check_grid_size(const Grid& grid) {
  if (grid.n > kMaxOracleNodesPerAxis) {
    std::ostringstream os;
    os << "dense oracle refused: " << grid.n << " nodes per axis exceeds "
       << kMaxOracleNodesPerAxis << " (quadratic memory)";
    throw ConfigError(os.str());
  }
}

std::size_t offset_index(const Grid& grid, std::size_t x, std::size_t y) {
  const int n = grid.n;
  if (grid.d == 2) {
    const int dx = (static_cast<int>(x / n) - static_cast<int>(y / n) + n) % n;
    const int dy = (static_cast<int>(x % n) - static_cast<int>(y % n) + n) % n;
    return grid.index(dx, dy);
  }
  const int x2 = static_cast<int>(x % n), y2 = static_cast<int>(y % n);
  const int x1 = static_cast<int>(x / n % n), y1 = static_cast<int>(y / n % n);
  const int x0 = static_cast<int>(x / n / n), y0 = static_cast<int>(y / n / n);
  return grid.index((x0 - y0 + n) % n, (x1 - y1 + n) % n, (x2 - y2 + n) % n);
}

cdouble radiation_c(int d) {
  if (d == 2) return std::polar(1.0 / std::sqrt(8.0 * kPi), kPi / 4.0);
  return cdouble{1.0 / (4.0 * kPi), 0.0};
}

/// Real 2N x 2N covariance of (Re u, Im u) from complex second moments.
Eigen::MatrixXd augmented_real_covariance(const Eigen::MatrixXcd& k_c,
                                          const Eigen::MatrixXcd& k_r) {
  const Eigen::Index n = k_c.rows();
  Eigen::MatrixXd cov(2 * n, 2 * n);
  cov.topLeftCorner(n, n) = 0.5 * (k_c + k_r).real();
  cov.bottomRightCorner(n, n) = 0.5 * (k_c - k_r).real();
  cov.topRightCorner(n, n) = 0.5 * (k_r - k_c).imag();
  cov.bottomLeftCorner(n, n) = 0.5 * (k_c + k_r).imag();
  return 0.5 * (cov + cov.transpose());
}

} // namespace

std::vector<double> stationary_covariance_lattice(const Grid& grid, double m,
                                                  double delta) {
  check_grid_size(grid);
  if (!(delta > 0.0))
    throw ConfigError("stationary_covariance_lattice: delta must be positive");
  const std::size_t nn = grid.node_count();
  const double inv_vol = 1.0 / std::pow(grid.length, grid.d);

  std::vector<double> density(nn);
  std::vector<Point> freq(nn);
  {
    std::size_t flat = 0;
    const int n = grid.n;
    auto fill = [&](double f0, double f1, double f2) {
      freq[flat] = {f0, f1, f2};
      density[flat] =
          std::pow(f0 * f0 + f1 * f1 + f2 * f2 + delta * delta, -0.5 * m);
      ++flat;
    };
    if (grid.d == 2) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          fill(grid.bin_frequency(i), grid.bin_frequency(j), 0.0);
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            fill(grid.bin_frequency(i), grid.bin_frequency(j),
                 grid.bin_frequency(k));
    }
  }

  std::vector<double> g(nn);
  for (std::size_t r = 0; r < nn; ++r) {
    const Point x = grid.node(r);
    double sum = 0.0;
    for (std::size_t k = 0; k < nn; ++k)
      sum += density[k] * std::cos(dot(freq[k], x, grid.d));
    g[r] = sum * inv_vol;
  }
  return g;
}

DenseKernelPair dense_kernels(const gmig::ScalarStrengthPair& strengths,
                              double delta) {
  const Grid& grid = strengths.grid;
  check_grid_size(grid);
  const std::size_t nn = grid.node_count();
  if (strengths.a_c.size() != nn || strengths.a_r.size() != nn)
    throw ConfigError("dense_kernels: strength size mismatch");

  const std::vector<double> g =
      stationary_covariance_lattice(grid, strengths.order_m, delta);

  // Row vector u(x) = (1, i) L(x) with L the lower Cholesky factor of
  // M(x) = 1/2 [[a_c + Re a_r, Im a_r], [Im a_r, a_c - Re a_r]].
  std::vector<cdouble> u1(nn), u2(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const double m11 = 0.5 * (strengths.a_c[i] + strengths.a_r[i].real());
    const double m12 = 0.5 * strengths.a_r[i].imag();
    const double m22 = 0.5 * (strengths.a_c[i] - strengths.a_r[i].real());
    const double l11 = std::sqrt(std::max(m11, 0.0));
    const double l21 = (l11 > 0.0) ? m12 / l11 : 0.0;
    const double l22 = std::sqrt(std::max(m22 - l21 * l21, 0.0));
    u1[i] = cdouble{l11, l21};
    u2[i] = cdouble{0.0, l22};
  }

  DenseKernelPair out;
  out.grid = grid;
  out.dim = 1;
  out.order_m = strengths.order_m;
  out.delta = delta;
  out.k_c.resize(nn, nn);
  out.k_r.resize(nn, nn);
  for (std::size_t x = 0; x < nn; ++x) {
    for (std::size_t y = 0; y < nn; ++y) {
      const double gxy = g[offset_index(grid, x, y)];
      out.k_c(x, y) =
          gxy * (u1[x] * std::conj(u1[y]) + u2[x] * std::conj(u2[y]));
      out.k_r(x, y) = gxy * (u1[x] * u1[y] + u2[x] * u2[y]);
    }
  }
  return out;
}

DenseKernelPair dense_kernels(const gmig::MatrixStrengthPair& strengths,
                              double delta) {
  const Grid& grid = strengths.grid;
  check_grid_size(grid);
  const int d = grid.d;
  const std::size_t nn = grid.node_count();

  const std::vector<double> g =
      stationary_covariance_lattice(grid, strengths.order_m, delta);

  // U(x) = P F(x), P = [I_d, i I_d], F the unique symmetric PSD square root
  // of the augmented real covariance at x.
  std::vector<Eigen::MatrixXcd> u(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const Eigen::MatrixXcd ac = strengths.at_c(i);
    const Eigen::MatrixXcd ar = strengths.at_r(i);
    const Eigen::MatrixXd cov = augmented_real_covariance(ac, ar);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    Eigen::VectorXd lam = es.eigenvalues();
    const double tr = std::max(cov.trace(), 1e-300);
    for (int k = 0; k < 2 * d; ++k) {
      if (lam(k) < -gmig::kPsdTol * tr) {
        std::ostringstream os;
        os << "dense_kernels: indefinite strengths at node " << i
           << " (eigenvalue " << lam(k) << ")";
        throw ConfigError(os.str());
      }
      lam(k) = std::sqrt(std::max(lam(k), 0.0));
    }
    const Eigen::MatrixXd f =
        es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    u[i] = f.topRows(d).cast<cdouble>() + kI * f.bottomRows(d).cast<cdouble>();
  }

  DenseKernelPair out;
  out.grid = grid;
  out.dim = d;
  out.order_m = strengths.order_m;
  out.delta = delta;
  const std::size_t n = nn * d;
  out.k_c.resize(n, n);
  out.k_r.resize(n, n);
  for (std::size_t x = 0; x < nn; ++x) {
    for (std::size_t y = 0; y < nn; ++y) {
      const double gxy = g[offset_index(grid, x, y)];
      const Eigen::MatrixXcd bc = gxy * (u[x] * u[y].adjoint());
      const Eigen::MatrixXcd br = gxy * (u[x] * u[y].transpose());
      out.k_c.block(x * d, y * d, d, d) = bc;
      out.k_r.block(x * d, y * d, d, d) = br;
    }
  }
  return out;
}

gmig::FieldRealization cholesky_sample(const DenseKernelPair& kernels,
                                       std::uint64_t seed) {
  const Eigen::Index n = kernels.k_c.rows();
  const Eigen::MatrixXd cov = augmented_real_covariance(kernels.k_c, kernels.k_r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd lam = es.eigenvalues();
  const double tr = std::max(cov.trace(), 1e-300);
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    if (lam(k) < -gmig::kPsdTol * tr)
      throw ConfigError("cholesky_sample: augmented covariance is indefinite");
    lam(k) = std::sqrt(std::max(lam(k), 0.0));
  }

  PolarNormal normals(split_seed(seed, stage::kOracleCholesky, 0));
  Eigen::VectorXd z(2 * n);
  for (Eigen::Index k = 0; k < 2 * n; ++k) z(k) = normals.next();
  const Eigen::VectorXd draw =
      es.eigenvectors() * (lam.asDiagonal() * (es.eigenvectors().transpose() * z));

  gmig::FieldRealization out;
  out.grid = kernels.grid;
  out.ncomp = kernels.dim;
  out.order_m = kernels.order_m;
  out.delta = kernels.delta;
  out.seed = seed;
  out.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
    out.values[k] = cdouble{draw(k), draw(n + k)};
  return out;
}

Eigen::VectorXcd brute_force_farfield(const waves::WaveKind& kind,
                                      const gmig::FieldRealization& f,
                                      const Point& xhat, double frequency,
                                      Eigen::VectorXcd* secondary) {
  const Grid& grid = f.grid;
  const int d = grid.d;
  if (!(frequency > 0.0))
    throw ConfigError("brute_force_farfield: frequency must be positive");
  const double hvol = std::pow(grid.spacing(), d);
  const std::size_t nn = grid.node_count();
  const cdouble cd = radiation_c(d);

  auto transform = [&](double kappa, int comp) {
    cdouble sum = 0.0;
    for (std::size_t i = 0; i < nn; ++i)
      sum += f.values[i * f.ncomp + comp] *
             std::polar(1.0, -kappa * dot(xhat, grid.node(i), d));
    return sum * hvol;
  };
  // Weighted transform: sum of (v . f)(y) exp(-i kappa xhat . y).
  auto weighted = [&](double kappa, const Eigen::VectorXd& v) {
    cdouble sum = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      cdouble dotf = 0.0;
      for (int c = 0; c < d; ++c) dotf += v(c) * f.values[i * d + c];
      sum += dotf * std::polar(1.0, -kappa * dot(xhat, grid.node(i), d));
    }
    return sum * hvol;
  };

  switch (kind.model) {
    case waves::Model::Acoustic: {
      Eigen::VectorXcd out(1);
      out(0) = -cd * std::pow(frequency, 0.5 * (d - 3)) * transform(frequency, 0);
      return out;
    }
    case waves::Model::Biharmonic: {
      Eigen::VectorXcd out(1);
      out(0) =
          -0.5 * cd * std::pow(frequency, 0.5 * (d - 7)) * transform(frequency, 0);
      return out;
    }
    case waves::Model::Electromagnetic: {
      if (d != 3)
        throw ConfigError("brute_force_farfield: electromagnetic requires d = 3");
      Eigen::VectorXcd out(3);
      for (int c = 0; c < 3; ++c)
        out(c) = kI * frequency * cd * transform(frequency, c);
      return out;
    }
    case waves::Model::Elastic: {
      const double cp = 1.0 / std::sqrt(kind.lame_lambda + 2.0 * kind.lame_mu);
      const double cs = 1.0 / std::sqrt(kind.lame_mu);
      const double wpow = std::pow(frequency, 0.5 * (d - 3));
      const cdouble pre_p = -cd * std::pow(cp, 0.5 * (d + 1)) * wpow;
      const cdouble pre_s = -cd * std::pow(cs, 0.5 * (d + 1)) * wpow;
      Eigen::VectorXd xv(d);
      for (int a = 0; a < d; ++a) xv(a) = xhat[a];
      Eigen::VectorXcd up(d), us(d);
      for (int j = 0; j < d; ++j) {
        const Eigen::VectorXd vp = xv(j) * xv; // v_{p,j} = xhat_j xhat
        Eigen::VectorXd vs = -vp;              // v_{s,j} = e_j - v_{p,j}
        vs(j) += 1.0;
        up(j) = pre_p * weighted(cp * frequency, vp);
        us(j) = pre_s * weighted(cs * frequency, vs);
      }
      if (secondary) *secondary = us;
      return up;
    }
  }
  throw ConfigError("brute_force_farfield: unknown wave kind");
}

} // namespace wavesrc::oracle
