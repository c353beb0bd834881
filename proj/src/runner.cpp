#include "wavesrc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "wavesrc/io.hpp"
#include "wavesrc/rng.hpp"

namespace wavesrc::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "wavesrc 0.1.0";

Point parse_point(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ConfigError("expected an array of " + std::to_string(d) + " coordinates");
  Point p{0.0, 0.0, 0.0};
  for (int i = 0; i < d; ++i) p[i] = j[i].get<double>();
  return p;
}

ShapeSpec parse_shape(const json& j, int d, bool matrix_kind) {
  if (j.value("shape", "gaussian-bump") != std::string("gaussian-bump"))
    throw ConfigError("unknown strength shape: " + j["shape"].get<std::string>());
  ShapeSpec s;
  s.center = parse_point(j.at("center"), d);
  s.width = j.at("width").get<double>();
  s.amplitude = j.value("amplitude", 1.0);
  s.phase = j.value("phase", 0.0);
  s.cutoff = j.value("cutoff", 6.0);
  if (!(s.width > 0.0)) throw ConfigError("shape width must be positive");
  if (!(s.cutoff >= 4.0))
    throw ConfigError("shape cutoff must be >= 4 widths (truncation tail)");
  if (matrix_kind) {
    const auto& m = j.at("matrix");
    if (!m.is_array() || static_cast<int>(m.size()) != d)
      throw ConfigError("matrix shape needs a d x d 'matrix' entry");
    s.matrix.resize(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s.matrix(a, b) = m[a][b].get<double>();
  } else if (j.contains("matrix")) {
    throw ConfigError("scalar wave kinds take no 'matrix' in strength shapes");
  }
  return s;
}

std::vector<ShapeSpec> parse_shapes(const json& j, int d, bool matrix_kind) {
  std::vector<ShapeSpec> out;
  for (const auto& item : j) out.push_back(parse_shape(item, d, matrix_kind));
  return out;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// Wavenumber per unit estimator frequency: c_s for elastic (both the shear
/// slot at omega + tau and the rescaled compressional slot land at
/// c_s * (omega + tau)), 1 otherwise.
double wavenumber_scale(const waves::WaveKind& kind) {
  if (kind.model != waves::Model::Elastic) return 1.0;
  return waves::ElasticSpeeds(kind.lame_lambda, kind.lame_mu).c_s;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw NumericalError("cannot open " + path);
  out << text;
  if (!out) throw NumericalError("write failed for " + path);
}

} // namespace

std::pair<double, double> order_interval(waves::Model model, int d) {
  switch (model) {
    case waves::Model::Acoustic:
    case waves::Model::Elastic:
      return {d - 4.0, static_cast<double>(d)};
    case waves::Model::Biharmonic:
      return {d - 6.0, static_cast<double>(d)};
    case waves::Model::Electromagnetic:
      return {-1.0, 3.0};
  }
  throw ConfigError("order_interval: unknown wave kind");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig c;
    const std::string kind = j.at("kind").get<std::string>();
    const waves::Model model = waves::model_from_name(kind);
    if (model == waves::Model::Elastic)
      c.kind = waves::WaveKind::elastic(j.at("lame_lambda").get<double>(),
                                        j.at("lame_mu").get<double>());
    else
      c.kind = waves::WaveKind{model, 0.0, 1.0};
    c.d = j.at("d").get<int>();
    c.grid = Grid(c.d, j.at("grid").at("n").get<int>(),
                  j.at("grid").at("length").get<double>());
    c.order_m = j.at("order_m").get<double>();
    c.delta = j.value("delta", 0.0);

    const bool matrix_kind = c.kind.is_vector();
    c.strengths.covariance =
        parse_shapes(j.at("strengths").at("covariance"), c.d, matrix_kind);
    if (j.at("strengths").contains("relation"))
      c.strengths.relation =
          parse_shapes(j.at("strengths").at("relation"), c.d, matrix_kind);

    const auto& band = j.at("band");
    c.q_values = band.at("q_values").get<std::vector<double>>();
    c.band_step = band.value("step", 0.25);
    c.shifts = band.at("shifts").get<std::vector<double>>();
    c.direction_count = j.value("directions", 8);

    if (j.contains("mode")) {
      const auto& mode = j.at("mode");
      const std::string type = mode.value("type", "single");
      if (type == "ensemble") {
        c.ensemble = true;
        c.realizations = mode.at("realizations").get<int>();
        c.kappa_eval = mode.at("kappa_eval").get<double>();
      } else if (type != "single") {
        throw ConfigError("mode.type must be 'single' or 'ensemble'");
      }
    }
    c.seed = j.value("seed", std::uint64_t{1});
    c.output_dir = j.value("output", std::string("out"));
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

double effective_delta(const ExperimentConfig& config) {
  return config.delta > 0.0 ? config.delta : gmig::default_delta(config.grid);
}

void validate_config(const ExperimentConfig& config) {
  if (config.grid.d != config.d)
    throw ConfigError("grid dimension does not match config d");
  if (config.kind.model == waves::Model::Electromagnetic && config.d != 3)
    throw ConfigError("electromagnetic runs require d = 3");

  const auto [lo, hi] = order_interval(config.kind.model, config.d);
  if (!(config.order_m > lo && config.order_m <= hi)) {
    std::ostringstream os;
    os << "order m = " << config.order_m << " outside the admissible interval ("
       << lo << ", " << hi << "] for " << waves::model_name(config.kind.model)
       << " recovery";
    throw ConfigError(os.str());
  }

  if (config.strengths.covariance.empty())
    throw ConfigError("at least one covariance strength shape is required");
  const double h = config.grid.spacing();
  for (const auto* list : {&config.strengths.covariance, &config.strengths.relation})
    for (const ShapeSpec& s : *list) {
      const double radius = s.cutoff * s.width;
      for (int a = 0; a < config.d; ++a)
        if (s.center[a] - radius < 4.0 * h ||
            s.center[a] + radius > config.grid.length - 4.0 * h)
          throw ConfigError(
              "strength shape support violates the 4h boundary margin");
    }

  if (config.q_values.empty())
    throw ConfigError("band.q_values must not be empty");
  for (double q : config.q_values)
    if (!(q > 0.0)) throw ConfigError("band Q values must be positive");
  if (!(config.band_step > 0.0 && config.band_step <= 0.5))
    throw ConfigError("band step must lie in (0, 0.5]");
  if (config.shifts.empty() || std::abs(config.shifts.front()) > 1e-12)
    throw ConfigError("band.shifts must start at tau = 0");
  for (double t : config.shifts)
    if (t < 0.0) throw ConfigError("band shifts must be >= 0");

  if (config.direction_count < 2 || config.direction_count % 2 != 0)
    throw ConfigError("direction count must be even and >= 2 (negation closure)");

  const double max_q = *std::max_element(config.q_values.begin(),
                                         config.q_values.end());
  const double tau_max = *std::max_element(config.shifts.begin(),
                                           config.shifts.end());
  double scale = wavenumber_scale(config.kind);
  if (config.kind.model == waves::Model::Elastic) {
    // Batched elastic evaluation also runs the shear ray at the rescaled
    // compressional frequency; cover the worst case.
    const waves::ElasticSpeeds sp(config.kind.lame_lambda, config.kind.lame_mu);
    scale *= std::max(1.0, sp.c_s / sp.c_p);
  }
  const double kappa_needed =
      config.ensemble ? scale * (config.kappa_eval + tau_max)
                      : scale * (2.0 * max_q + tau_max);
  forward::check_frequency_budget(config.grid, kappa_needed);

  if (config.ensemble) {
    if (config.realizations < 2)
      throw ConfigError("ensemble mode needs at least 2 realizations");
    if (!(config.kappa_eval > 0.0))
      throw ConfigError("ensemble mode needs a positive kappa_eval");
  }
}

double shape_value(const ShapeSpec& shape, const Point& x, int d) {
  double r2 = 0.0;
  for (int a = 0; a < d; ++a) {
    const double t = x[a] - shape.center[a];
    r2 += t * t;
  }
  const double rad = shape.cutoff * shape.width;
  if (r2 > rad * rad) return 0.0;
  return shape.amplitude * std::exp(-0.5 * r2 / (shape.width * shape.width));
}

cdouble shape_fourier(const ShapeSpec& shape, const Point& xi, int d) {
  const double w2 = shape.width * shape.width;
  const double xi2 = dot(xi, xi, d);
  const double mag = shape.amplitude * std::pow(2.0 * kPi * w2, 0.5 * d) *
                     std::exp(-0.5 * w2 * xi2);
  return std::polar(mag, shape.phase - dot(xi, shape.center, d));
}

cdouble analytic_fourier(const std::vector<ShapeSpec>& shapes, const Point& xi,
                         int d) {
  cdouble sum = 0.0;
  for (const ShapeSpec& s : shapes)
    sum += shape_fourier(s, xi, d) * std::polar(1.0, 0.0);
  return sum;
}

Eigen::MatrixXcd analytic_fourier_matrix(const std::vector<ShapeSpec>& shapes,
                                         const Point& xi, int d) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const ShapeSpec& s : shapes) {
    if (s.matrix.rows() != d)
      throw ConfigError("matrix strength shape lacks its d x d matrix");
    sum += shape_fourier(s, xi, d) * s.matrix.cast<cdouble>();
  }
  return sum;
}

gmig::ScalarStrengthPair build_scalar_strengths(const ExperimentConfig& config) {
  gmig::ScalarStrengthPair s;
  s.grid = config.grid;
  s.order_m = config.order_m;
  const std::size_t nn = config.grid.node_count();
  s.a_c.assign(nn, 0.0);
  s.a_r.assign(nn, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < nn; ++i) {
    const Point x = config.grid.node(i);
    for (const ShapeSpec& b : config.strengths.covariance) {
      if (b.phase != 0.0)
        throw ConfigError("covariance shapes must be real (phase = 0)");
      s.a_c[i] += shape_value(b, x, config.d);
    }
    for (const ShapeSpec& b : config.strengths.relation)
      s.a_r[i] += std::polar(shape_value(b, x, config.d), b.phase);
  }
  return s;
}

gmig::MatrixStrengthPair build_matrix_strengths(const ExperimentConfig& config) {
  gmig::MatrixStrengthPair s;
  s.grid = config.grid;
  s.order_m = config.order_m;
  const int d = config.d;
  const std::size_t nn = config.grid.node_count();
  s.a_c.assign(nn * d * d, cdouble{0.0, 0.0});
  s.a_r.assign(nn * d * d, cdouble{0.0, 0.0});
  for (std::size_t i = 0; i < nn; ++i) {
    const Point x = config.grid.node(i);
    for (const ShapeSpec& b : config.strengths.covariance) {
      if (b.phase != 0.0)
        throw ConfigError("covariance shapes must be real (phase = 0)");
      const double v = shape_value(b, x, d);
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c)
          s.a_c[(i * d + a) * d + c] += v * b.matrix(a, c);
    }
    for (const ShapeSpec& b : config.strengths.relation) {
      const cdouble v = std::polar(shape_value(b, x, d), b.phase);
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c)
          s.a_r[(i * d + a) * d + c] += v * b.matrix(a, c);
    }
  }
  return s;
}

forward::DirectionSet make_directions(const ExperimentConfig& config) {
  if (config.d == 2) return forward::DirectionSet::circle(config.direction_count);
  return forward::DirectionSet::sphere_pairs(config.direction_count / 2);
}

void apply_threads(int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("WAVESRC_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) Eigen::setNbThreads(threads);
}

std::string RunManifest::to_json() const {
  json j;
  j["config_key"] = config_key;
  j["version"] = version;
  j["seed"] = seed;
  j["stages"] = json::array();
  for (const auto& st : stages) {
    json s;
    s["name"] = st.name;
    s["seconds"] = st.seconds;
    s["outputs"] = st.outputs;
    j["stages"].push_back(s);
  }
  if (!error.empty()) j["error"] = error;
  return j.dump(2);
}

namespace {

std::string config_fingerprint(const ExperimentConfig& config) {
  band::EstimatorConfig probe;
  probe.kind = config.kind;
  probe.d = config.d;
  probe.order_m = config.order_m;
  probe.xhat = {1.0, 0.0, 0.0};
  probe.band = config.q_values.empty()
                   ? forward::FrequencyBand()
                   : forward::FrequencyBand(config.q_values.back(),
                                            config.band_step);
  std::uint64_t h = splitmix64(config.seed ^ config.grid.node_count());
  h = splitmix64(h ^ std::hash<std::string>{}(band::config_key(probe)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(config.direction_count));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Pipeline {
  const ExperimentConfig& config;
  fs::path out;
  RunManifest manifest;
  gmig::FieldRealization field;
  bool relation_present = false;

  // estimate-stage products for the largest Q, shift-major
  std::vector<Eigen::MatrixXcd> cov_estimates, rel_estimates;
  std::vector<double> cov_se, rel_se;
  forward::DirectionSet dirs;
  recover::RecoveryMetrics cov_metrics, rel_metrics;

  explicit Pipeline(const ExperimentConfig& cfg) : config(cfg), out(cfg.output_dir) {
    manifest.config_key = config_fingerprint(cfg);
    manifest.version = kVersion;
    manifest.seed = cfg.seed;
    relation_present = !cfg.strengths.relation.empty();
  }

  void persist_manifest() {
    fs::create_directories(out);
    write_text((out / "manifest.json").string(), manifest.to_json());
  }

  template <typename F>
  void stage(const std::string& name, F&& body) {
    StageRecord rec;
    rec.name = name;
    const double t0 = now_seconds();
    try {
      body(rec);
    } catch (...) {
      rec.seconds = now_seconds() - t0;
      manifest.stages.push_back(rec);
      try {
        manifest.error = "stage '" + name + "' failed";
        persist_manifest();
      } catch (...) {
      }
      throw;
    }
    rec.seconds = now_seconds() - t0;
    manifest.stages.push_back(rec);
  }

  fs::path field_path() const { return out / "field.bin"; }

  void sample_stage(StageRecord& rec) {
    const double delta = effective_delta(config);
    if (config.kind.is_vector()) {
      field = gmig::sample_vector_gmig(build_matrix_strengths(config), delta,
                                       config.seed);
    } else {
      field = gmig::sample_scalar_gmig(build_scalar_strengths(config), delta,
                                       config.seed);
    }
    io::save_field(field_path().string(), field);
    rec.outputs.push_back(field_path().string());
  }

  void load_field_stage(StageRecord& rec) {
    field = io::load_field(field_path().string());
    rec.outputs.push_back(field_path().string());
  }

  band::EstimatorConfig estimator_config(band::Target target, const Point& xhat,
                                         double tau, double q) const {
    band::EstimatorConfig ec;
    ec.kind = config.kind;
    ec.target = target;
    ec.d = config.d;
    ec.order_m = config.order_m;
    ec.xhat = xhat;
    ec.shift = tau;
    ec.band = forward::FrequencyBand(q, config.band_step);
    return ec;
  }

  Eigen::MatrixXcd analytic_truth(band::Target target, const Point& xhat,
                                  double tau) const {
    // Elastic estimates converge to A-hat at c_s tau xhat; scalar/EM at tau xhat.
    const double r = wavenumber_scale(config.kind) * tau;
    const Point xi{r * xhat[0], r * xhat[1], r * xhat[2]};
    const auto& shapes = target == band::Target::Covariance
                             ? config.strengths.covariance
                             : config.strengths.relation;
    if (config.kind.is_vector()) {
      if (shapes.empty()) return Eigen::MatrixXcd::Zero(config.d, config.d);
      return analytic_fourier_matrix(shapes, xi, config.d);
    }
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = shapes.empty() ? cdouble{0.0, 0.0}
                             : analytic_fourier(shapes, xi, config.d);
    return v;
  }

  void estimate_single(StageRecord& rec) {
    dirs = make_directions(config);
    const fs::path results = out / "band_results.csv";
    const fs::path trace = out / "error_vs_q.csv";
    std::FILE* tf = std::fopen(trace.string().c_str(), "w");
    if (!tf) throw NumericalError("cannot open " + trace.string());
    std::fputs("q,target,rel_error\n", tf);

    const double max_q = *std::max_element(config.q_values.begin(),
                                           config.q_values.end());
    std::vector<band::Target> targets{band::Target::Covariance};
    if (relation_present) targets.push_back(band::Target::Relation);

    for (double q : config.q_values) {
      for (band::Target target : targets) {
        const cdouble norm_c =
            recover::normalization_constant(config.kind, config.d, target);
        double err2 = 0.0, ref2 = 0.0;
        std::vector<Eigen::MatrixXcd> values;
        std::vector<double> ses;
        for (double tau : config.shifts) {
          for (const Point& xhat : dirs.directions) {
            const auto ec = estimator_config(target, xhat, tau, q);
            const auto res = band::band_average(ec, field);
            band::append_result_csv(results.string(), ec, res);
            const Eigen::MatrixXcd normalized = res.estimate / norm_c;
            const Eigen::MatrixXcd truth = analytic_truth(target, xhat, tau);
            err2 += (normalized - truth).squaredNorm();
            ref2 += truth.squaredNorm();
            values.push_back(res.estimate);
            ses.push_back(res.jackknife_se);
          }
        }
        const double rel = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
        std::fprintf(tf, "%.17g,%s,%.17g\n", q, band::target_name(target), rel);
        if (q == max_q) {
          if (target == band::Target::Covariance) {
            cov_estimates = std::move(values);
            cov_se = std::move(ses);
          } else {
            rel_estimates = std::move(values);
            rel_se = std::move(ses);
          }
        }
      }
    }
    std::fclose(tf);
    rec.outputs.push_back(results.string());
    rec.outputs.push_back(trace.string());

    // Far-field samples of the largest band for the record.
    const auto band_nodes = forward::FrequencyBand(max_q, config.band_step).nodes();
    std::vector<double> freqs;
    for (std::size_t i = 0; i < band_nodes.size();
         i += std::max<std::size_t>(band_nodes.size() / 64, 1))
      freqs.push_back(band_nodes[i]);
    const auto recs = forward::farfield_batch(config.kind, field, dirs, freqs);
    const fs::path ffpath = out / "farfield.csv";
    forward::write_farfield_csv(ffpath.string(), recs);
    rec.outputs.push_back(ffpath.string());
  }

  void estimate_ensemble(StageRecord& rec) {
    dirs = make_directions(config);
    const double delta = effective_delta(config);

    std::vector<gmig::FieldRealization> fields;
    fields.reserve(config.realizations);
    if (config.kind.is_vector()) {
      const gmig::VectorGmigSampler sampler(build_matrix_strengths(config), delta);
      for (int r = 0; r < config.realizations; ++r)
        fields.push_back(sampler.sample(split_seed(config.seed, stage::kEnsembleMember, r)));
    } else {
      const gmig::ScalarGmigSampler sampler(build_scalar_strengths(config), delta);
      for (int r = 0; r < config.realizations; ++r)
        fields.push_back(sampler.sample(split_seed(config.seed, stage::kEnsembleMember, r)));
    }

    const band::EnsembleFn fn = [&](std::size_t r, const Point& xhat,
                                    double freq) {
      return forward::farfield(config.kind, fields[r], xhat, freq);
    };

    const fs::path results = out / "ensemble_results.csv";
    std::FILE* rf = std::fopen(results.string().c_str(), "w");
    if (!rf) throw NumericalError("cannot open " + results.string());
    std::fputs(
        "target,tau,xhat0,xhat1,xhat2,standard_error,rel_error,"
        "estimate_re_im...\n",
        rf);

    std::vector<band::Target> targets{band::Target::Covariance};
    if (relation_present) targets.push_back(band::Target::Relation);
    for (band::Target target : targets) {
      const cdouble norm_c =
          recover::normalization_constant(config.kind, config.d, target);
      for (double tau : config.shifts) {
        for (const Point& xhat : dirs.directions) {
          auto ec = estimator_config(target, xhat, tau, config.q_values.front());
          const auto res = band::ensemble_limit(ec, config.kappa_eval,
                                                config.realizations, fn);
          const Eigen::MatrixXcd normalized = res.estimate / norm_c;
          const Eigen::MatrixXcd truth = analytic_truth(target, xhat, tau);
          const double ref = truth.norm();
          const double rel = ref > 0.0 ? (normalized - truth).norm() / ref
                                       : (normalized - truth).norm();
          std::fprintf(rf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                       band::target_name(target), tau, xhat[0], xhat[1],
                       xhat[2], res.standard_error, rel);
          for (Eigen::Index a = 0; a < res.estimate.rows(); ++a)
            for (Eigen::Index b = 0; b < res.estimate.cols(); ++b)
              std::fprintf(rf, ",%.17g,%.17g", res.estimate(a, b).real(),
                           res.estimate(a, b).imag());
          std::fputc('\n', rf);
          if (target == band::Target::Covariance && tau == config.shifts.front() &&
              &xhat == &dirs.directions.front())
            cov_metrics.rel_l2 = rel;
        }
      }
    }
    std::fclose(rf);
    rec.outputs.push_back(results.string());
  }

  std::vector<cdouble> truth_grid(band::Target target) const {
    const int dim = config.kind.is_vector() ? config.d : 1;
    const std::size_t entries = static_cast<std::size_t>(dim) * dim;
    const std::size_t nn = config.grid.node_count();
    std::vector<cdouble> truth(nn * entries, cdouble{0.0, 0.0});
    const auto& shapes = target == band::Target::Covariance
                             ? config.strengths.covariance
                             : config.strengths.relation;
    for (std::size_t i = 0; i < nn; ++i) {
      const Point x = config.grid.node(i);
      for (const ShapeSpec& b : shapes) {
        const cdouble v = std::polar(shape_value(b, x, config.d), b.phase);
        if (dim == 1) {
          truth[i] += v;
        } else {
          for (int a = 0; a < dim; ++a)
            for (int c = 0; c < dim; ++c)
              truth[i * entries + a * dim + c] += v * b.matrix(a, c);
        }
      }
    }
    return truth;
  }

  void recover_one(band::Target target,
                   const std::vector<Eigen::MatrixXcd>& estimates,
                   const std::vector<double>& ses, StageRecord& rec,
                   recover::RecoveryMetrics& metrics) {
    recover::EstimateGrid grid;
    grid.kind = config.kind;
    grid.target = target;
    grid.d = config.d;
    grid.order_m = config.order_m;
    grid.directions = dirs.directions;
    grid.shifts = config.shifts;
    grid.values = estimates;
    grid.standard_errors = ses;

    const auto data = recover::normalize(grid);
    const auto recon = recover::invert_polar_fourier(data, config.grid);
    metrics = recover::recovery_error(recon, truth_grid(target));

    const std::string tag =
        target == band::Target::Covariance ? "covariance" : "relation";
    const fs::path csv = out / ("recon_" + tag + ".csv");
    recover::export_strength_csv(csv.string(), recon);
    rec.outputs.push_back(csv.string());

    if (recon.dim == 1) {
      gmig::FieldRealization wrap;
      wrap.grid = recon.grid;
      wrap.ncomp = 1;
      wrap.order_m = config.order_m;
      wrap.delta = effective_delta(config);
      wrap.seed = config.seed;
      wrap.values = recon.values;
      const fs::path bin = out / ("recon_" + tag + ".bin");
      io::save_field(bin.string(), wrap);
      rec.outputs.push_back(bin.string());
    }

    // Plot-ready center-row slice: truth vs reconstruction.
    const fs::path slice = out / ("slice_" + tag + ".csv");
    std::FILE* sf = std::fopen(slice.string().c_str(), "w");
    if (!sf) throw NumericalError("cannot open " + slice.string());
    std::fputs("x,truth_re,truth_im,recon_re,recon_im\n", sf);
    const auto truth = truth_grid(target);
    const int n = config.grid.n;
    const std::size_t entries =
        static_cast<std::size_t>(recon.dim) * recon.dim;
    for (int j = 0; j < n; ++j) {
      const std::size_t node = config.grid.index(n / 2, j);
      const cdouble t = truth[node * entries];
      const cdouble r = recon.values[node * entries];
      std::fprintf(sf, "%.17g,%.17g,%.17g,%.17g,%.17g",
                   config.grid.node(node)[1], t.real(), t.imag(), r.real(),
                   r.imag());
      std::fputc('\n', sf);
    }
    std::fclose(sf);
    rec.outputs.push_back(slice.string());
  }

  void recover_stage(StageRecord& rec) {
    recover_one(band::Target::Covariance, cov_estimates, cov_se, rec, cov_metrics);
    if (relation_present && !rel_estimates.empty())
      recover_one(band::Target::Relation, rel_estimates, rel_se, rec, rel_metrics);
  }

  void report_stage(StageRecord& rec) {
    std::ostringstream os;
    os << "run " << manifest.config_key << " (" << kVersion << ")\n"
       << "kind: " << waves::model_name(config.kind.model) << ", d=" << config.d
       << ", m=" << config.order_m << ", grid " << config.grid.n << "^"
       << config.d << ", L=" << config.grid.length << "\n"
       << "seed: " << config.seed << "\n";
    if (config.ensemble) {
      os << "mode: ensemble, M=" << config.realizations
         << ", kappa_eval=" << config.kappa_eval << "\n"
         << "covariance first-sample relative error: " << cov_metrics.rel_l2
         << "\n";
    } else {
      os << "mode: single realization, Q_max="
         << *std::max_element(config.q_values.begin(), config.q_values.end())
         << "\n"
         << "covariance reconstruction: rel_l2=" << cov_metrics.rel_l2
         << ", max_abs=" << cov_metrics.max_abs_err << "\n";
      if (relation_present)
        os << "relation reconstruction: rel_l2=" << rel_metrics.rel_l2
           << ", max_abs=" << rel_metrics.max_abs_err << "\n";
    }
    const fs::path path = out / "recovery_report.txt";
    write_text(path.string(), os.str());
    rec.outputs.push_back(path.string());
  }
};

int stage_rank(const std::string& name) {
  if (name.empty() || name == "sample") return 0;
  if (name == "estimate") return 1;
  if (name == "recover") return 2;
  throw ConfigError("unknown stage: " + name + " (sample, estimate, recover)");
}

} // namespace

RunManifest run(const ExperimentConfig& config, const std::string& stage_from) {
  const int from = stage_rank(stage_from);
  validate_config(config);
  Pipeline p(config);
  fs::create_directories(p.out);
  write_text((p.out / "config_echo.json").string(), [&] {
    json j;
    j["config_key"] = p.manifest.config_key;
    j["seed"] = config.seed;
    j["kind"] = waves::model_name(config.kind.model);
    j["d"] = config.d;
    j["order_m"] = config.order_m;
    return j.dump(2);
  }());

  if (from <= 0)
    p.stage("sample", [&](StageRecord& r) { p.sample_stage(r); });
  else
    p.stage("load-field", [&](StageRecord& r) { p.load_field_stage(r); });

  if (config.ensemble) {
    p.stage("estimate", [&](StageRecord& r) { p.estimate_ensemble(r); });
  } else {
    p.stage("estimate", [&](StageRecord& r) { p.estimate_single(r); });
    p.stage("recover", [&](StageRecord& r) { p.recover_stage(r); });
  }
  p.stage("report", [&](StageRecord& r) { p.report_stage(r); });
  p.persist_manifest();
  return p.manifest;
}

RunManifest convergence_sweep(const ExperimentConfig& config,
                              const std::string& axis,
                              const std::vector<double>& values) {
  if (values.size() < 3)
    throw ConfigError("convergence_sweep: need at least 3 axis values");
  if (axis != "q" && axis != "directions" && axis != "tau_max" &&
      axis != "realizations")
    throw ConfigError(
        "convergence_sweep: axis must be q, directions, tau_max, or realizations");

  const fs::path base(config.output_dir);
  fs::create_directories(base);
  const fs::path trace = base / ("sweep_" + axis + ".csv");
  std::FILE* tf = std::fopen(trace.string().c_str(), "w");
  if (!tf) throw NumericalError("cannot open " + trace.string());
  std::fputs("axis_value,cov_rel_l2,rel_rel_l2\n", tf);

  RunManifest last;
  for (double v : values) {
    ExperimentConfig c = config; // paired seeds: identical root seed per value
    std::ostringstream dir;
    dir << config.output_dir << "/sweep_" << axis << "_" << v;
    c.output_dir = dir.str();
    if (axis == "q") {
      c.q_values = {v};
    } else if (axis == "directions") {
      c.direction_count = static_cast<int>(v);
    } else if (axis == "tau_max") {
      const double dtau = 2.0 * kPi / config.grid.length;
      c.shifts.clear();
      for (double t = 0.0; t <= v + 1e-9; t += dtau) c.shifts.push_back(t);
    } else {
      c.ensemble = true;
      c.realizations = static_cast<int>(v);
      if (!(c.kappa_eval > 0.0)) c.kappa_eval = 2.0 * c.q_values.front();
    }
    validate_config(c);
    Pipeline p(c);
    fs::create_directories(p.out);
    if (c.ensemble) {
      p.stage("sample", [&](StageRecord& r) { p.sample_stage(r); });
      p.stage("estimate", [&](StageRecord& r) { p.estimate_ensemble(r); });
    } else {
      p.stage("sample", [&](StageRecord& r) { p.sample_stage(r); });
      p.stage("estimate", [&](StageRecord& r) { p.estimate_single(r); });
      p.stage("recover", [&](StageRecord& r) { p.recover_stage(r); });
    }
    p.persist_manifest();
    std::fprintf(tf, "%.17g,%.17g,%.17g\n", v, p.cov_metrics.rel_l2,
                 p.rel_metrics.rel_l2);
    last = p.manifest;
  }
  std::fclose(tf);
  return last;
}

} // namespace wavesrc::runner
