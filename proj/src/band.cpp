#include "wavesrc/band.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unordered_map>

#include <json.hpp>

namespace wavesrc::band {

namespace {

constexpr int kSubBands = 8;

Point negate(const Point& p) { return {-p[0], -p[1], -p[2]}; }

/// One product term of the averaged estimator at a single frequency node.
/// Covariance conjugate-transposes the second factor, relation transposes.
Eigen::MatrixXcd pair_product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                              Target target) {
  if (target == Target::Covariance) return a * b.adjoint();
  return a * b.transpose();
}

struct NodeEval {
  // product(kappa, tau) including all model coefficients, excluding the
  // kappa^exponent band weight.
  std::function<Eigen::MatrixXcd(double kappa, const FarfieldFn& fn)> product;
};

NodeEval make_node_eval(const EstimatorConfig& cfg) {
  const Point x1 = cfg.xhat;
  const Point x2 = cfg.target == Target::Covariance ? cfg.xhat : negate(cfg.xhat);
  const double tau = cfg.shift;
  if (cfg.kind.model != waves::Model::Elastic) {
    return {[=](double kappa, const FarfieldFn& fn) {
      const auto fa = fn(x1, kappa + tau);
      const auto fb = fn(x2, kappa);
      return pair_product(fa.value, fb.value, cfg.target);
    }};
  }
  const waves::ElasticSpeeds sp(cfg.kind.lame_lambda, cfg.kind.lame_mu);
  const double ratio = sp.c_s / sp.c_p;
  const double cp2 = sp.c_p * sp.c_p;
  const double cs2 = sp.c_s * sp.c_s;
  return {[=, target = cfg.target](double omega, const FarfieldFn& fn) {
    // Compressional slots are queried at the rescaled frequency
    // c_s/c_p * (omega [+ tau]); shear slots at the plain frequency.
    const Eigen::VectorXcd up_hi = fn(x1, ratio * (omega + tau)).value;
    const Eigen::VectorXcd us_hi = fn(x1, omega + tau).secondary;
    const Eigen::VectorXcd up_lo = fn(x2, ratio * omega).value;
    const Eigen::VectorXcd us_lo = fn(x2, omega).secondary;
    Eigen::MatrixXcd acc = pair_product(up_hi, up_lo, target) / (cp2 * cp2);
    acc += pair_product(up_hi, us_lo, target) / (cs2 * cp2);
    acc += pair_product(us_hi, up_lo, target) / (cs2 * cp2);
    acc += pair_product(us_hi, us_lo, target) / (cs2 * cs2);
    return acc;
  }};
}

double band_weight(const EstimatorConfig& cfg, double kappa) {
  const double e = cfg.weight_exponent_override
                       ? *cfg.weight_exponent_override
                       : weight_exponent(cfg.kind, cfg.d, cfg.order_m);
  double w = std::pow(kappa, e);
  if (cfg.kind.model == waves::Model::Elastic) {
    const waves::ElasticSpeeds sp(cfg.kind.lame_lambda, cfg.kind.lame_mu);
    w *= std::pow(sp.c_s, weight_exponent(cfg.kind, cfg.d, cfg.order_m));
  }
  return w;
}

void check_config(const EstimatorConfig& cfg) {
  if (cfg.d != 2 && cfg.d != 3) throw ConfigError("estimator: d must be 2 or 3");
  if (std::abs(norm(cfg.xhat, cfg.d) - 1.0) > 1e-12)
    throw ConfigError("estimator: xhat is not a unit vector");
  if (cfg.shift < 0.0) throw ConfigError("estimator: shift tau must be >= 0");
}

std::uint64_t sample_key(int dir, double frequency) {
  return (static_cast<std::uint64_t>(dir) << 62) ^
         std::bit_cast<std::uint64_t>(frequency);
}

} // namespace

const char* target_name(Target t) {
  return t == Target::Covariance ? "covariance" : "relation";
}

Target target_from_name(const std::string& name) {
  if (name == "covariance") return Target::Covariance;
  if (name == "relation") return Target::Relation;
  throw ConfigError("unknown estimator target: " + name);
}

double weight_exponent(const waves::WaveKind& kind, int d, double order_m) {
  // Probe frequency is arbitrary: only the exponent is read.
  const auto pre = waves::farfield_prefactor(kind, d, 1.0);
  return order_m - 2.0 * pre.kappa_power;
}

BandAverageResult band_average(const EstimatorConfig& config, const FarfieldFn& fn) {
  check_config(config);
  if (!(config.band.step <= 0.5))
    throw ConfigError("band_average: step must be <= 0.5");
  const std::vector<double> nodes = config.band.nodes();
  const NodeEval eval = make_node_eval(config);

  const int dim = config.kind.is_vector() ? config.d : 1;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Eigen::MatrixXcd> blocks(kSubBands,
                                       Eigen::MatrixXcd::Zero(dim, dim));

  std::vector<double> measures(kSubBands, 0.0); // quadrature mass per block

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double trap = (i == 0 || i + 1 == nodes.size()) ? 0.5 : 1.0;
    const Eigen::MatrixXcd term =
        trap * band_weight(config, nodes[i]) * eval.product(nodes[i], fn);
    total += term;
    const std::size_t block = i * kSubBands / nodes.size();
    blocks[block] += term;
    measures[block] += trap;
  }

  const double scale = config.band.step / config.band.q;
  BandAverageResult out;
  out.estimate = scale * total;
  out.node_count = nodes.size();

  // Batch-means spread of the 8 sub-band pseudo-replicates. Each block is
  // normalized by its own quadrature mass (the node count is not a multiple
  // of 8), so a frequency-flat integrand has exactly zero spread.
  double mass = 0.0;
  for (double m : measures) mass += m;
  std::vector<Eigen::MatrixXcd> reps;
  reps.reserve(kSubBands);
  for (int b = 0; b < kSubBands; ++b) {
    if (!(measures[b] > 0.0)) continue;
    reps.push_back(scale * (mass / measures[b]) * blocks[b]);
  }
  if (reps.size() >= 2) {
    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& r : reps) mean += r;
    mean /= static_cast<double>(reps.size());
    double var = 0.0;
    for (const auto& r : reps) var += (r - mean).squaredNorm();
    out.jackknife_se =
        std::sqrt(var / (reps.size() * (reps.size() - 1.0)));
  }
  return out;
}

BandAverageResult band_average(const EstimatorConfig& config,
                               const gmig::FieldRealization& field) {
  check_config(config);
  {
    // Elastic slots land at wavenumber c_s * frequency, but the batched
    // records also evaluate the shear ray at the rescaled compressional
    // frequency, so the worst case carries the extra c_s/c_p factor.
    double scale = 1.0;
    if (config.kind.model == waves::Model::Elastic) {
      const waves::ElasticSpeeds sp(config.kind.lame_lambda, config.kind.lame_mu);
      scale = sp.c_s * std::max(1.0, sp.c_s / sp.c_p);
    }
    forward::check_frequency_budget(
        field.grid, scale * (config.band.max_frequency() + config.shift));
  }

  // Enumerate the exact frequency arguments the generic path will request,
  // per direction, and evaluate each direction's list in one ray batch.
  const Point x2 =
      config.target == Target::Covariance ? config.xhat : negate(config.xhat);
  const bool two_dirs = config.target == Target::Relation;
  std::vector<double> hi, lo; // frequencies queried at xhat resp. x2
  const bool elastic = config.kind.model == waves::Model::Elastic;
  double ratio = 1.0;
  if (elastic) {
    const waves::ElasticSpeeds sp(config.kind.lame_lambda, config.kind.lame_mu);
    ratio = sp.c_s / sp.c_p;
  }
  for (double k : config.band.nodes()) {
    hi.push_back(k + config.shift);
    lo.push_back(k);
    if (elastic) {
      hi.push_back(ratio * (k + config.shift));
      lo.push_back(ratio * k);
    }
  }
  if (!two_dirs) {
    hi.insert(hi.end(), lo.begin(), lo.end());
    lo.clear();
  }

  std::unordered_map<std::uint64_t, forward::FarFieldRecord> table;
  auto ingest = [&](const Point& xhat, int dir, const std::vector<double>& freqs) {
    if (freqs.empty()) return;
    auto recs = forward::farfield_batch(
        config.kind, field, forward::DirectionSet::from_vectors(config.d, {xhat}),
        freqs);
    for (auto& rec : recs)
      table.emplace(sample_key(dir, rec.frequency), std::move(rec));
  };
  ingest(config.xhat, 0, hi);
  ingest(x2, 1, lo);

  const FarfieldFn lookup = [&](const Point& xhat, double frequency) {
    const bool second = two_dirs && !(xhat[0] == config.xhat[0] &&
                                      xhat[1] == config.xhat[1] &&
                                      xhat[2] == config.xhat[2]);
    const auto it = table.find(sample_key(second ? 1 : 0, frequency));
    if (it == table.end())
      throw NumericalError("band_average: internal sample table miss");
    return it->second;
  };
  BandAverageResult out = band_average(config, lookup);
  out.seed = field.seed;
  return out;
}

EnsembleResult ensemble_limit(const EstimatorConfig& config, double kappa_eval,
                              int realizations, const EnsembleFn& fn) {
  check_config(config);
  if (realizations < 2)
    throw ConfigError("ensemble_limit: need at least 2 realizations");
  if (!(kappa_eval > 0.0))
    throw ConfigError("ensemble_limit: kappa_eval must be positive");
  const NodeEval eval = make_node_eval(config);
  const double w = band_weight(config, kappa_eval);

  const int dim = config.kind.is_vector() ? config.d : 1;
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Eigen::MatrixXcd> draws;
  draws.reserve(realizations);
  for (int r = 0; r < realizations; ++r) {
    const FarfieldFn bound = [&](const Point& xhat, double freq) {
      return fn(static_cast<std::size_t>(r), xhat, freq);
    };
    draws.push_back(w * eval.product(kappa_eval, bound));
    mean += draws.back();
  }
  mean /= realizations;

  double var = 0.0;
  for (const auto& d : draws) var += (d - mean).squaredNorm();
  var /= (realizations - 1.0);

  EnsembleResult out;
  out.estimate = mean;
  out.standard_error = std::sqrt(var / realizations);
  out.realizations = realizations;
  return out;
}

DecayTable decay_diagnostic(const waves::WaveKind& kind, const Point& xhat,
                            double kappa2, const std::vector<double>& kappa1,
                            int realizations, int d, const EnsembleFn& fn) {
  if (realizations < 100)
    throw ConfigError("decay_diagnostic: ensemble size must be >= 100");
  if (kind.is_vector())
    throw ConfigError("decay_diagnostic: scalar wave kinds only");
  const Point neg = {-xhat[0], -xhat[1], -xhat[2]};

  DecayTable out;
  out.rows.reserve(kappa1.size());
  for (double k1 : kappa1) {
    cdouble m_dc = 0.0, m_dr = 0.0, m_sp = 0.0, m_sc = 0.0;
    double var = 0.0;
    std::vector<cdouble> draws;
    draws.reserve(realizations);
    for (int r = 0; r < realizations; ++r) {
      const auto idx = static_cast<std::size_t>(r);
      const cdouble a = fn(idx, xhat, k1).value(0);
      const cdouble b = fn(idx, xhat, kappa2).value(0);
      const cdouble bn = fn(idx, neg, kappa2).value(0);
      m_dc += a * std::conj(b);
      m_dr += a * bn;
      m_sp += a * b;
      m_sc += a * std::conj(bn);
      draws.push_back(a * std::conj(b));
    }
    const double inv = 1.0 / realizations;
    DecayRow row;
    row.kappa1 = k1;
    row.kappa2 = kappa2;
    row.diff_conj = std::abs(m_dc) * inv;
    row.diff_relation = std::abs(m_dr) * inv;
    row.sum_plain = std::abs(m_sp) * inv;
    row.sum_conj_neg = std::abs(m_sc) * inv;
    const cdouble mean = m_dc * inv;
    for (const cdouble& z : draws) var += std::norm(z - mean);
    row.standard_error = std::sqrt(var / (realizations - 1.0) * inv);
    out.rows.push_back(row);
  }

  // Slope of log(diff_conj) vs -log(1 + |k1 - k2|), offsets >= 1 only.
  std::vector<double> xs, ys;
  for (const auto& row : out.rows) {
    const double off = std::abs(row.kappa1 - row.kappa2);
    if (off >= 1.0 && row.diff_conj > 0.0) {
      xs.push_back(-std::log1p(off));
      ys.push_back(std::log(row.diff_conj));
    }
  }
  if (xs.size() >= 2) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double n = static_cast<double>(xs.size());
    const double denom = n * sxx - sx * sx;
    if (denom > 0.0) {
      out.fitted_exponent = (n * sxy - sx * sy) / denom;
      double rss = 0.0;
      const double icpt = (sy - out.fitted_exponent * sx) / n;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - icpt - out.fitted_exponent * xs[i];
        rss += e * e;
      }
      if (n > 2.0)
        out.fitted_exponent_se = std::sqrt(rss / (n - 2.0) / (sxx - sx * sx / n));
    }
  }
  return out;
}

std::string config_key(const EstimatorConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  mix(static_cast<std::uint64_t>(config.kind.model));
  mix(std::bit_cast<std::uint64_t>(config.kind.lame_lambda));
  mix(std::bit_cast<std::uint64_t>(config.kind.lame_mu));
  mix(static_cast<std::uint64_t>(config.target));
  mix(static_cast<std::uint64_t>(config.d));
  mix(std::bit_cast<std::uint64_t>(config.order_m));
  for (int a = 0; a < 3; ++a) mix(std::bit_cast<std::uint64_t>(config.xhat[a]));
  mix(std::bit_cast<std::uint64_t>(config.shift));
  mix(std::bit_cast<std::uint64_t>(config.band.q));
  mix(std::bit_cast<std::uint64_t>(config.band.step));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void append_result_csv(const std::string& path, const EstimatorConfig& config,
                       const BandAverageResult& result) {
  const bool fresh = !std::filesystem::exists(path);
  std::FILE* out = std::fopen(path.c_str(), "a");
  if (!out) throw NumericalError("append_result_csv: cannot open " + path);
  if (fresh)
    std::fputs(
        "config,seed,kind,target,tau,q,step,jackknife_se,estimate_re_im...\n",
        out);
  std::fprintf(out, "%s,%llu,%s,%s,%.17g,%.17g,%.17g,%.17g",
               config_key(config).c_str(),
               static_cast<unsigned long long>(result.seed),
               waves::model_name(config.kind.model), target_name(config.target),
               config.shift, config.band.q, config.band.step,
               result.jackknife_se);
  for (Eigen::Index i = 0; i < result.estimate.rows(); ++i)
    for (Eigen::Index j = 0; j < result.estimate.cols(); ++j)
      std::fprintf(out, ",%.17g,%.17g", result.estimate(i, j).real(),
                   result.estimate(i, j).imag());
  std::fputc('\n', out);
  if (std::fclose(out) != 0)
    throw NumericalError("append_result_csv: write failed for " + path);
}

std::string config_json(const EstimatorConfig& config) {
  nlohmann::json j;
  j["kind"] = waves::model_name(config.kind.model);
  if (config.kind.model == waves::Model::Elastic) {
    j["lame_lambda"] = config.kind.lame_lambda;
    j["lame_mu"] = config.kind.lame_mu;
  }
  j["target"] = target_name(config.target);
  j["d"] = config.d;
  j["order_m"] = config.order_m;
  j["xhat"] = config.d == 2
                  ? nlohmann::json::array({config.xhat[0], config.xhat[1]})
                  : nlohmann::json::array(
                        {config.xhat[0], config.xhat[1], config.xhat[2]});
  j["tau"] = config.shift;
  j["band"] = {{"q", config.band.q}, {"step", config.band.step}};
  if (config.weight_exponent_override)
    j["weight_exponent_override"] = *config.weight_exponent_override;
  j["config_key"] = config_key(config);
  return j.dump(2);
}

} // namespace wavesrc::band
