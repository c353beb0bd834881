#ifndef WAVESRC_BAND_HPP
#define WAVESRC_BAND_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavesrc/forward.hpp"

namespace wavesrc::band {

enum class Target { Covariance, Relation };

const char* target_name(Target t);
Target target_from_name(const std::string& name);

/// Far-field sample supplier. Must honor the record contract of
/// forward::farfield for the configured wave kind.
using FarfieldFn =
    std::function<forward::FarFieldRecord(const Point& xhat, double frequency)>;

/// Per-realization supplier for ensemble estimators; `realization` indexes
/// independent sources.
using EnsembleFn = std::function<forward::FarFieldRecord(
    std::size_t realization, const Point& xhat, double frequency)>;

struct EstimatorConfig {
  waves::WaveKind kind;
  Target target = Target::Covariance;
  int d = 2;
  double order_m = 2.0;
  Point xhat{1.0, 0.0, 0.0};
  double shift = 0.0; // tau
  forward::FrequencyBand band;

  /// Diagnostic only: replaces the frequency exponent of the band weight
  /// (slope tests run it off by +-1). Production paths leave it unset.
  std::optional<double> weight_exponent_override;
};

/// Frequency exponent of the band weight, derived from the far-field
/// prefactor so the weighted product is frequency-flat: m - 2 * kappa_power.
double weight_exponent(const waves::WaveKind& kind, int d, double order_m);

struct BandAverageResult {
  Eigen::MatrixXcd estimate; // 1x1 scalar or d x d matrix
  double jackknife_se = 0.0; // Frobenius-scale spread over 8 sub-bands
  std::size_t node_count = 0;
  std::uint64_t seed = 0;
};

/// Trapezoid approximation of (1/Q) int_Q^{2Q} weight * product d kappa.
/// Covariance pairs (xhat, xhat) with a conjugated second factor; relation
/// pairs (xhat, -xhat) unconjugated. Elastic queries compressional slots at
/// the rescaled frequencies c_s/c_p * (omega [+ tau]).
BandAverageResult band_average(const EstimatorConfig& config, const FarfieldFn& fn);

/// Batched convenience path: precomputes every sample the estimator will
/// request with ray-batched transforms, then runs the generic path.
BandAverageResult band_average(const EstimatorConfig& config,
                               const gmig::FieldRealization& field);

struct EnsembleResult {
  Eigen::MatrixXcd estimate;
  double standard_error = 0.0; // sqrt(total complex variance / M)
  int realizations = 0;
};

/// Monte-Carlo mean over M independent realizations of
/// weight(kappa_eval) * product(kappa_eval, tau). The band in `config` is
/// ignored; requires M >= 2 for the variance estimate.
EnsembleResult ensemble_limit(const EstimatorConfig& config, double kappa_eval,
                              int realizations, const EnsembleFn& fn);

/// One row of the two-frequency correlation scan at fixed kappa2.
struct DecayRow {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  // Moduli of the four ensemble-averaged products. The first two decay in
  // |kappa1 - kappa2|, the last two in kappa1 + kappa2.
  double diff_conj = 0.0;     // |E[u(x,k1) conj u(x,k2)]|
  double diff_relation = 0.0; // |E[u(x,k1) u(-x,k2)]|
  double sum_plain = 0.0;     // |E[u(x,k1) u(x,k2)]|
  double sum_conj_neg = 0.0;  // |E[u(x,k1) conj u(-x,k2)]|
  double standard_error = 0.0;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  /// Least-squares slope of log(diff_conj) against -log(1 + |k1 - k2|) over
  /// nonzero offsets; positive means decay.
  double fitted_exponent = 0.0;
  double fitted_exponent_se = 0.0;
};

/// Empirical correlation-decay scan; scalar wave kinds, ensemble size >= 100.
DecayTable decay_diagnostic(const waves::WaveKind& kind, const Point& xhat,
                            double kappa2, const std::vector<double>& kappa1,
                            int realizations, int d, const EnsembleFn& fn);

/// Short stable key of an estimator config, for result bookkeeping.
std::string config_key(const EstimatorConfig& config);

/// Appends one result row (creating the file and header when absent).
void append_result_csv(const std::string& path, const EstimatorConfig& config,
                       const BandAverageResult& result);

/// Full config as JSON, for reproducibility manifests.
std::string config_json(const EstimatorConfig& config);

} // namespace wavesrc::band

#endif
