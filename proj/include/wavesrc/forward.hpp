#ifndef WAVESRC_FORWARD_HPP
#define WAVESRC_FORWARD_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavesrc/gmig.hpp"
#include "wavesrc/waves.hpp"

namespace wavesrc::forward {

/// Observation directions on the unit circle/sphere. Relation-target
/// estimators pair each direction with its negation, so sets used there must
/// be closed under negation.
struct DirectionSet {
  int d = 2;
  std::vector<Point> directions;

  /// d = 2: `count` equispaced angles; negation-closed when count is even.
  static DirectionSet circle(int count);
  /// d = 3: `pairs` Fibonacci-lattice points on the upper hemisphere plus
  /// their negations (2*pairs directions, negation-closed by construction).
  static DirectionSet sphere_pairs(int pairs);
  /// Validates |x| = 1 to 1e-12 on each entry.
  static DirectionSet from_vectors(int d, std::vector<Point> vectors);

  std::size_t size() const { return directions.size(); }
  bool negation_closed(double tol = 1e-12) const;
  /// Index of -x_i, or nullopt if absent.
  std::optional<std::size_t> negation_index(std::size_t i, double tol = 1e-12) const;
};

/// Arithmetic frequency lattice kappa_l = Q + l * step covering [Q, 2Q].
struct FrequencyBand {
  double q = 0.0;
  double step = 0.25;

  FrequencyBand() = default;
  FrequencyBand(double q_, double step_);

  std::vector<double> nodes() const; // Q, Q+step, ..., 2Q inclusive
  double max_frequency() const { return 2.0 * q; }
};

/// Half-Nyquist feasibility budget for oscillatory quadrature; throws
/// ConfigError when max_frequency exceeds 0.5 * pi / h.
void check_frequency_budget(const Grid& grid, double max_frequency);

/// Trapezoid quadrature of the source Fourier transform
/// fhat(xi) = h^d sum_y f(y) exp(-i xi . y), one entry per component.
/// Refuses |xi| beyond the grid Nyquist limit pi / h.
Eigen::VectorXcd source_fourier(const gmig::FieldRealization& f, const Point& xi);

/// Batch path along the ray xi = kappa_l * xhat: exact separable-phase
/// evaluation, bit-compatible with source_fourier up to summation order.
/// Returns ncomp x len(kappas).
Eigen::MatrixXcd source_fourier_ray(const gmig::FieldRealization& f,
                                    const Point& xhat,
                                    const std::vector<double>& kappas);

/// One far-field sample. `value` is the scalar pattern (size 1), the electric
/// pattern (size d), or the compressional pattern (size d); `secondary` holds
/// the shear pattern for the elastic pair.
struct FarFieldRecord {
  waves::WaveKind kind;
  Point direction{0.0, 0.0, 0.0};
  double frequency = 0.0;
  std::uint64_t seed = 0;
  Eigen::VectorXcd value;
  Eigen::VectorXcd secondary;
};

FarFieldRecord farfield(const waves::WaveKind& kind, const gmig::FieldRealization& f,
                        const Point& xhat, double frequency);

/// Ray-batched far fields over all (direction, frequency) pairs.
std::vector<FarFieldRecord> farfield_batch(const waves::WaveKind& kind,
                                           const gmig::FieldRealization& f,
                                           const DirectionSet& dirs,
                                           const std::vector<double>& frequencies);

/// Diagnostic volume potential at an exterior point: -int Phi_d f,
/// -int F_d f, -int G_d f, or i kappa int Phi_3 f by wave kind. O(h^2)
/// quadrature; refuses points closer than 2h to the support box.
Eigen::VectorXcd nearfield(const waves::WaveKind& kind, const gmig::FieldRealization& f,
                           const Point& x, double frequency);

/// CSV stream: kind, seed, direction components, frequency, Re/Im per
/// component (elastic rows carry the compressional then shear components).
void write_farfield_csv(const std::string& path,
                        const std::vector<FarFieldRecord>& records);

} // namespace wavesrc::forward

#endif
