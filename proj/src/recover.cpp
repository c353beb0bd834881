#include "wavesrc/recover.hpp"

#include <cmath>
#include <cstdio>

namespace wavesrc::recover {

namespace {

double direction_solid_angle(int d, std::size_t count) {
  const double total = (d == 2) ? 2.0 * kPi : 4.0 * kPi;
  return total / static_cast<double>(count);
}

} // namespace

cdouble normalization_constant(const waves::WaveKind& kind, int d,
                               band::Target target) {
  // Reference frequency is arbitrary: dividing out kappa^power makes the
  // result exact for any choice.
  const double k = 2.0;
  const auto pre = waves::farfield_prefactor(kind, d, k);
  const cdouble p = pre.primary / std::pow(k, pre.kappa_power);
  if (kind.model == waves::Model::Elastic) {
    // Compressional-pair constant of the four-term combination: the
    // c_p^{-4} coefficient, the c_s/c_p frequency rescaling of the slots,
    // and the c_s powers of the weight and of the symbol argument.
    const waves::ElasticSpeeds sp(kind.lame_lambda, kind.lame_mu);
    const double power = 0.5 * (d - 3);
    const double real_factor = std::pow(sp.c_p, -4.0) *
                               std::pow(sp.c_s / sp.c_p, 2.0 * power) *
                               std::pow(sp.c_s, 3.0 - d);
    if (target == band::Target::Covariance)
      return real_factor * (p * std::conj(p));
    return real_factor * (p * p);
  }
  if (target == band::Target::Covariance) return p * std::conj(p);
  return p * p;
}

PolarFourierData normalize(const EstimateGrid& estimates) {
  const std::size_t expected = estimates.shifts.size() * estimates.directions.size();
  if (estimates.values.size() != expected)
    throw ConfigError("normalize: value count does not match (shift, direction) grid");
  if (!estimates.standard_errors.empty() &&
      estimates.standard_errors.size() != expected)
    throw ConfigError("normalize: standard error count mismatch");

  const cdouble c =
      normalization_constant(estimates.kind, estimates.d, estimates.target);
  PolarFourierData out;
  out.target = estimates.target;
  out.d = estimates.d;
  out.dim = estimates.kind.is_vector() ? estimates.d : 1;
  out.directions = estimates.directions;
  out.shifts = estimates.shifts;
  if (estimates.kind.model == waves::Model::Elastic) {
    // (e18)/(e19) deliver A-hat at c_s * tau * xhat; re-index the radial
    // axis so downstream sees plain Fourier arguments.
    const waves::ElasticSpeeds sp(estimates.kind.lame_lambda,
                                  estimates.kind.lame_mu);
    for (double& t : out.shifts) t *= sp.c_s;
  }
  out.values.reserve(estimates.values.size());
  for (const auto& v : estimates.values) {
    if (v.rows() != out.dim || v.cols() != out.dim)
      throw ConfigError("normalize: estimate dimension does not match wave kind");
    out.values.push_back(v / c);
  }
  const double ca = std::abs(c);
  for (double se : estimates.standard_errors)
    out.standard_errors.push_back(se / ca);
  return out;
}

ReconstructedStrength invert_polar_fourier(const PolarFourierData& data,
                                           const Grid& grid, bool window) {
  const std::size_t ns = data.shifts.size();
  const std::size_t nd = data.directions.size();
  if (ns < 2 || nd == 0)
    throw ConfigError("invert_polar_fourier: need at least 2 shifts and 1 direction");
  if (data.values.size() != ns * nd)
    throw ConfigError("invert_polar_fourier: value count mismatch");
  if (std::abs(data.shifts.front()) > 1e-12)
    throw ConfigError("invert_polar_fourier: shifts must start at tau = 0");
  const double dtau = data.shifts[1] - data.shifts[0];
  if (!(dtau > 0.0))
    throw ConfigError("invert_polar_fourier: shifts must be increasing");
  for (std::size_t i = 1; i < ns; ++i)
    if (std::abs(data.shifts[i] - i * dtau) > 1e-9 * dtau)
      throw ConfigError("invert_polar_fourier: shifts must be uniformly spaced");
  const double tau_max = data.shifts.back();
  if (tau_max * grid.spacing() > kPi * (1.0 + 1e-12))
    throw ConfigError("invert_polar_fourier: tau_max exceeds the target-grid Nyquist");
  if (data.target == band::Target::Relation) {
    const auto dirs = forward::DirectionSet::from_vectors(data.d, data.directions);
    if (!dirs.negation_closed(1e-9))
      throw ConfigError(
          "invert_polar_fourier: relation target needs negation-closed directions");
  }

  const double domega = direction_solid_angle(data.d, nd);
  const double front = std::pow(2.0 * kPi, -data.d);
  const double win_lo = 0.8 * tau_max;

  ReconstructedStrength out;
  out.grid = grid;
  out.dim = data.dim;
  const std::size_t nn = grid.node_count();
  const std::size_t entries = static_cast<std::size_t>(data.dim) * data.dim;
  out.values.assign(nn * entries, cdouble{0.0, 0.0});

  // Flatten (shift, direction) samples with their quadrature weights.
  struct Sample {
    Point xi;
    Eigen::MatrixXcd weighted;
  };
  std::vector<Sample> samples;
  samples.reserve(ns * nd);
  for (std::size_t i = 0; i < ns; ++i) {
    const double tau = data.shifts[i];
    double w = front * std::pow(tau, data.d - 1) * dtau * domega;
    if (window && tau > win_lo && tau_max > win_lo) {
      const double t = (tau - win_lo) / (tau_max - win_lo);
      w *= 0.5 * (1.0 + std::cos(kPi * t));
    }
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < nd; ++j) {
      Sample s;
      const Point& xh = data.directions[j];
      s.xi = {tau * xh[0], tau * xh[1], tau * xh[2]};
      s.weighted = w * data.values[i * nd + j];
      samples.push_back(std::move(s));
    }
  }

  Eigen::MatrixXcd acc(data.dim, data.dim);
  for (std::size_t node = 0; node < nn; ++node) {
    const Point x = grid.node(node);
    acc.setZero();
    for (const Sample& s : samples)
      acc += std::polar(1.0, dot(s.xi, x, grid.d)) * s.weighted;
    if (data.target == band::Target::Covariance) {
      const Eigen::MatrixXcd herm = 0.5 * (acc + acc.adjoint());
      out.symmetrization_residual =
          std::max(out.symmetrization_residual, (acc - herm).norm());
      acc = herm;
    }
    for (int a = 0; a < data.dim; ++a)
      for (int b = 0; b < data.dim; ++b)
        out.values[node * entries + a * data.dim + b] = acc(a, b);
  }
  return out;
}

RecoveryMetrics recovery_error(const ReconstructedStrength& recon,
                               const std::vector<cdouble>& truth) {
  if (truth.size() != recon.values.size())
    throw ConfigError("recovery_error: truth grid size mismatch");
  double err2 = 0.0, ref2 = 0.0;
  RecoveryMetrics m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = std::abs(recon.values[i] - truth[i]);
    err2 += e * e;
    ref2 += std::norm(truth[i]);
    m.max_abs_err = std::max(m.max_abs_err, e);
  }
  m.abs_l2 = std::sqrt(err2);
  if (ref2 > 0.0) {
    m.rel_l2 = std::sqrt(err2 / ref2);
  } else {
    m.truth_zero = true;
    m.rel_l2 = m.abs_l2;
  }
  return m;
}

void export_strength_csv(const std::string& path,
                         const ReconstructedStrength& recon) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw NumericalError("export_strength_csv: cannot open " + path);
  const int d = recon.grid.d;
  const std::size_t entries = static_cast<std::size_t>(recon.dim) * recon.dim;
  std::fputs(d == 2 ? "x0,x1" : "x0,x1,x2", out);
  for (std::size_t e = 0; e < entries; ++e)
    std::fprintf(out, ",re_%zu,im_%zu", e, e);
  std::fputc('\n', out);
  for (std::size_t i = 0; i < recon.grid.node_count(); ++i) {
    const Point p = recon.grid.node(i);
    std::fprintf(out, "%.17g,%.17g", p[0], p[1]);
    if (d == 3) std::fprintf(out, ",%.17g", p[2]);
    for (std::size_t e = 0; e < entries; ++e) {
      const cdouble v = recon.values[i * entries + e];
      std::fprintf(out, ",%.17g,%.17g", v.real(), v.imag());
    }
    std::fputc('\n', out);
  }
  if (std::fclose(out) != 0)
    throw NumericalError("export_strength_csv: write failed for " + path);
}

} // namespace wavesrc::recover
