#ifndef WAVESRC_RUNNER_HPP
#define WAVESRC_RUNNER_HPP

#include <string>
#include <vector>

#include "wavesrc/band.hpp"
#include "wavesrc/recover.hpp"

namespace wavesrc::runner {

/// One analytic strength contribution: amplitude * e^{i phase} *
/// exp(-|x - center|^2 / (2 width^2)), hard-truncated at |x - center| >
/// cutoff * width so the grid function is compactly supported. The analytic
/// Fourier factor ignores the truncation tail (it is below 1e-7 relative for
/// cutoff >= 6). For matrix strengths, `matrix` scales the bump entrywise.
struct ShapeSpec {
  Point center{0.5, 0.5, 0.5};
  double width = 0.1;
  double amplitude = 1.0;
  double phase = 0.0;
  double cutoff = 6.0;
  Eigen::MatrixXd matrix; // empty for scalar kinds
};

struct StrengthSpec {
  std::vector<ShapeSpec> covariance;
  std::vector<ShapeSpec> relation;
};

struct ExperimentConfig {
  waves::WaveKind kind;
  int d = 2;
  Grid grid;
  double order_m = 2.0;
  double delta = 0.0; // 0 = default 2 pi / L
  StrengthSpec strengths;
  std::vector<double> q_values;
  double band_step = 0.25;
  std::vector<double> shifts;
  int direction_count = 8;
  bool ensemble = false;
  int realizations = 0;
  double kappa_eval = 0.0;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Admissible order interval of the wave type's recovery theorem:
/// acoustic/elastic (d-4, d], biharmonic (d-6, d], electromagnetic (-1, 3].
std::pair<double, double> order_interval(waves::Model model, int d);

/// Full validation; throws ConfigError citing the violated interval or
/// constraint. Includes the Nyquist budget for the largest band.
void validate_config(const ExperimentConfig& config);

double shape_value(const ShapeSpec& shape, const Point& x, int d);
/// Closed-form Fourier factor amplitude e^{i phase} (2 pi w^2)^{d/2}
/// e^{-i xi . center} e^{-w^2 |xi|^2 / 2} (truncation tail ignored).
cdouble shape_fourier(const ShapeSpec& shape, const Point& xi, int d);

gmig::ScalarStrengthPair build_scalar_strengths(const ExperimentConfig& config);
gmig::MatrixStrengthPair build_matrix_strengths(const ExperimentConfig& config);

cdouble analytic_fourier(const std::vector<ShapeSpec>& shapes, const Point& xi,
                         int d);
Eigen::MatrixXcd analytic_fourier_matrix(const std::vector<ShapeSpec>& shapes,
                                         const Point& xi, int d);

/// Observation directions for the configured dimension (equispaced circle or
/// hemisphere pairs; negation-closed when direction_count is even).
forward::DirectionSet make_directions(const ExperimentConfig& config);

double effective_delta(const ExperimentConfig& config);

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  std::vector<std::string> outputs;
};

struct RunManifest {
  std::string config_key;
  std::string version;
  std::uint64_t seed = 0;
  std::vector<StageRecord> stages;
  std::string error; // empty on success; otherwise the failing stage is last

  std::string to_json() const;
};

/// End-to-end pipeline: sample -> far fields -> band estimates -> recovery ->
/// report, persisting artifacts under config.output_dir. `stage_from` resumes
/// from "sample" (default), "estimate", or "recover" (later stages reload the
/// sampled field container from the output directory).
RunManifest run(const ExperimentConfig& config, const std::string& stage_from = "");

/// Re-runs the pipeline across >= 3 values of one axis ("q", "directions",
/// "tau_max", or "realizations") with paired seeds; writes an error-vs-axis
/// trace CSV and returns the last manifest.
RunManifest convergence_sweep(const ExperimentConfig& config,
                              const std::string& axis,
                              const std::vector<double>& values);

/// Thread count resolution: explicit argument > WAVESRC_THREADS env > 0
/// (library default). Applies to Eigen's internal parallelism.
void apply_threads(int threads);

} // namespace wavesrc::runner

#endif
