#ifndef WAVESRC_GMIG_HPP
#define WAVESRC_GMIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavesrc/common.hpp"
#include "wavesrc/grid.hpp"

namespace wavesrc::gmig {

/// Admissibility tolerance for augmented second-moment matrices, relative to
/// the trace.
inline constexpr double kPsdTol = 1e-10;

/// Scalar principal strengths (a_c, a_r) of order m sampled on a grid.
/// a_c >= 0 and |a_r| <= a_c pointwise; both vanish outside D.
struct ScalarStrengthPair {
  Grid grid;
  double order_m = 2.0;
  std::vector<double> a_c;   // node-major
  std::vector<cdouble> a_r;  // node-major
};

/// Matrix strengths (A_c, A_r); per node a d x d complex matrix stored
/// row-major. The augmented matrix [[A_c, A_r], [conj A_r, conj A_c]] must be
/// Hermitian PSD pointwise.
struct MatrixStrengthPair {
  Grid grid;
  double order_m = 2.0;
  std::vector<cdouble> a_c;  // node-major, d*d entries per node
  std::vector<cdouble> a_r;

  Eigen::MatrixXcd at_c(std::size_t node) const;
  Eigen::MatrixXcd at_r(std::size_t node) const;
};

/// One sampled complex source on a grid; scalar (ncomp = 1) or d-vector.
/// Bit-exact reproducible from (seed, strengths, delta).
struct FieldRealization {
  Grid grid;
  int ncomp = 1;
  double order_m = 2.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<cdouble> values; // node-major, ncomp interleaved
};

/// Regularized isotropic spectral density S(xi) = (|xi|^2 + delta^2)^{-m/2}.
/// The residual against |xi|^{-m} is O(|xi|^{-m-2}).
double spectral_density(double m, double delta, double xi_norm);

/// Discrete lattice sum L^{-d} sum_k S(xi_k): the variance G(0) of the
/// stationary factor on this grid.
double stationary_variance(const Grid& grid, double m, double delta);

/// Default low-frequency regularization, one frequency-lattice cell.
inline double default_delta(const Grid& grid) { return 2.0 * kPi / grid.length; }

struct StationaryPair {
  std::vector<double> g1, g2;
};

/// Two independent real stationary Gaussian fields with spectral density S,
/// by frequency-domain coloring of complex white noise and one inverse FFT.
StationaryPair sample_stationary_pair(const Grid& grid, double m, double delta,
                                      std::uint64_t seed);

/// Validation report; `pass` refers to hard admissibility and support checks,
/// warnings are informational.
struct StrengthReport {
  bool pass = true;
  double min_margin = 0.0;       // scalar: min(a_c - |a_r|); matrix: min augmented eigenvalue
  std::size_t worst_node = 0;
  bool support_margin_ok = true;
  std::vector<std::string> warnings;
  std::string failure;
};

StrengthReport validate_strengths(const ScalarStrengthPair& s);
StrengthReport validate_strengths(const MatrixStrengthPair& s);

/// Precomputed per-node modulation factors; reusable across realizations.
class ScalarGmigSampler {
public:
  ScalarGmigSampler(ScalarStrengthPair strengths, double delta);

  FieldRealization sample(std::uint64_t seed) const;

  // Lower-Cholesky factor of M(x) = 1/2 [[a_c + Re a_r, Im a_r],
  //                                      [Im a_r, a_c - Re a_r]].
  // Exposed so dense-kernel assembly elsewhere can match the construction.
  const std::vector<double>& l11() const { return l11_; }
  const std::vector<double>& l21() const { return l21_; }
  const std::vector<double>& l22() const { return l22_; }
  const ScalarStrengthPair& strengths() const { return strengths_; }
  double delta() const { return delta_; }

private:
  ScalarStrengthPair strengths_;
  double delta_;
  std::vector<double> l11_, l21_, l22_;
};

class VectorGmigSampler {
public:
  VectorGmigSampler(MatrixStrengthPair strengths, double delta);

  FieldRealization sample(std::uint64_t seed) const;

  /// Symmetric PSD square root of the real 2d x 2d covariance at one node,
  /// ordering (Re f, Im f). Unique, so independent reconstructions agree.
  Eigen::MatrixXd factor(std::size_t node) const;
  const MatrixStrengthPair& strengths() const { return strengths_; }
  double delta() const { return delta_; }

private:
  MatrixStrengthPair strengths_;
  double delta_;
  std::vector<double> factors_; // node-major, (2d)^2 entries per node
};

FieldRealization sample_scalar_gmig(const ScalarStrengthPair& strengths,
                                    double delta, std::uint64_t seed);
FieldRealization sample_vector_gmig(const MatrixStrengthPair& strengths,
                                    double delta, std::uint64_t seed);

/// Real 2d x 2d covariance blocks from (A_c, A_r) via the complex-Gaussian
/// correspondence, ordering (Re f, Im f).
Eigen::MatrixXd real_covariance_from_strengths(const Eigen::MatrixXcd& a_c,
                                               const Eigen::MatrixXcd& a_r);

} // namespace wavesrc::gmig

#endif
