#ifndef WAVESRC_RECOVER_HPP
#define WAVESRC_RECOVER_HPP

#include <string>
#include <vector>

#include "wavesrc/band.hpp"

namespace wavesrc::recover {

/// Band-average estimates laid out over a polar (tau, direction) sampling
/// set; values are shift-major (index = shift * ndir + dir).
struct EstimateGrid {
  waves::WaveKind kind;
  band::Target target = band::Target::Covariance;
  int d = 2;
  double order_m = 2.0;
  std::vector<Point> directions;
  std::vector<double> shifts; // the tau arguments handed to the estimator
  std::vector<Eigen::MatrixXcd> values;
  std::vector<double> standard_errors; // optional, same indexing or empty
};

/// Fourier samples a-hat(tau * xhat) after removing the model constant.
/// Elastic data arrives with shifts re-indexed tau -> c_s * tau, so the
/// radial coordinate is already the plain Fourier radius.
struct PolarFourierData {
  band::Target target = band::Target::Covariance;
  int d = 2;
  int dim = 1; // 1 scalar, d matrix
  std::vector<Point> directions;
  std::vector<double> shifts;
  std::vector<Eigen::MatrixXcd> values;
  std::vector<double> standard_errors;
};

/// Model constant in front of a-hat, derived from farfield_prefactor (weight
/// times the prefactor pair product, frequency powers cancel exactly):
/// covariance |P|^2, relation P^2 with P the frequency-free prefactor part.
cdouble normalization_constant(const waves::WaveKind& kind, int d,
                               band::Target target);

/// Divides estimates by the model constant; rescales the elastic shift axis.
PolarFourierData normalize(const EstimateGrid& estimates);

struct ReconstructedStrength {
  Grid grid;
  int dim = 1;                 // 1 scalar, d matrix
  std::vector<cdouble> values; // node-major, dim*dim entries per node
  /// Largest discarded anti-Hermitian / imaginary part (covariance targets).
  double symmetrization_residual = 0.0;
};

/// Windowed polar Fourier synthesis on the source grid:
/// a(x) ~ (2 pi)^{-d} sum w_ij v_ij exp(i tau_i xhat_j . x) with
/// w_ij = tau_i^{d-1} dtau dOmega_j and a raised-cosine radial taper over
/// the top 20% of [0, tau_max] (disabled by `window = false`).
/// Covariance output is Hermitian-symmetrized (real for scalars); the
/// residual is reported, not silently dropped.
/// Preconditions: shifts uniform from 0; tau_max * h <= pi; relation targets
/// need negation-closed directions.
ReconstructedStrength invert_polar_fourier(const PolarFourierData& data,
                                           const Grid& grid, bool window = true);

struct RecoveryMetrics {
  double rel_l2 = 0.0;
  double abs_l2 = 0.0;
  double max_abs_err = 0.0;
  bool truth_zero = false; // rel_l2 is reported as abs_l2 in that case
};

/// Error of a reconstruction against a known strength grid (same layout).
RecoveryMetrics recovery_error(const ReconstructedStrength& recon,
                               const std::vector<cdouble>& truth);

/// CSV: node coordinates followed by Re/Im of each strength entry.
void export_strength_csv(const std::string& path,
                         const ReconstructedStrength& recon);

} // namespace wavesrc::recover

#endif
