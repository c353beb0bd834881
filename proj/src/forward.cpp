#include "wavesrc/forward.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace wavesrc::forward {

namespace {

Eigen::MatrixXcd phase_matrix(const std::vector<double>& kappas, double comp,
                              double h, int n) {
  // P(l, j) = exp(-i kappa_l * comp * h * j)
  Eigen::MatrixXcd p(kappas.size(), n);
  for (std::size_t l = 0; l < kappas.size(); ++l) {
    const double w = -kappas[l] * comp * h;
    for (int j = 0; j < n; ++j) p(l, j) = std::polar(1.0, w * j);
  }
  return p;
}

void check_direction(const Point& xhat, int d) {
  if (std::abs(norm(xhat, d) - 1.0) > 1e-12)
    throw ConfigError("direction is not a unit vector");
}

} // namespace

DirectionSet DirectionSet::circle(int count) {
  if (count < 1) throw ConfigError("DirectionSet::circle: count must be positive");
  DirectionSet set;
  set.d = 2;
  set.directions.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double a = 2.0 * kPi * i / count;
    set.directions.push_back({std::cos(a), std::sin(a), 0.0});
  }
  return set;
}

DirectionSet DirectionSet::sphere_pairs(int pairs) {
  if (pairs < 1) throw ConfigError("DirectionSet::sphere_pairs: pairs must be positive");
  DirectionSet set;
  set.d = 3;
  set.directions.reserve(2 * pairs);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < pairs; ++i) {
    // Fibonacci lattice on the upper hemisphere: z in (0, 1].
    const double z = (i + 0.5) / pairs;
    const double rho = std::sqrt(std::max(1.0 - z * z, 0.0));
    const double a = golden * i;
    set.directions.push_back({rho * std::cos(a), rho * std::sin(a), z});
  }
  for (int i = 0; i < pairs; ++i) {
    const Point& p = set.directions[i];
    set.directions.push_back({-p[0], -p[1], -p[2]});
  }
  return set;
}

DirectionSet DirectionSet::from_vectors(int d, std::vector<Point> vectors) {
  if (d != 2 && d != 3) throw ConfigError("DirectionSet: d must be 2 or 3");
  for (const Point& v : vectors) check_direction(v, d);
  DirectionSet set;
  set.d = d;
  set.directions = std::move(vectors);
  return set;
}

std::optional<std::size_t> DirectionSet::negation_index(std::size_t i,
                                                        double tol) const {
  const Point& p = directions[i];
  for (std::size_t j = 0; j < directions.size(); ++j) {
    double dist = 0.0;
    for (int a = 0; a < d; ++a) {
      const double t = directions[j][a] + p[a];
      dist += t * t;
    }
    if (std::sqrt(dist) <= tol) return j;
  }
  return std::nullopt;
}

bool DirectionSet::negation_closed(double tol) const {
  for (std::size_t i = 0; i < directions.size(); ++i)
    if (!negation_index(i, tol)) return false;
  return true;
}

FrequencyBand::FrequencyBand(double q_, double step_) : q(q_), step(step_) {
  if (!(q > 0.0)) throw ConfigError("FrequencyBand: Q must be positive");
  if (!(step > 0.0)) throw ConfigError("FrequencyBand: step must be positive");
  const double count = q / step;
  if (std::abs(count - std::round(count)) > 1e-9)
    throw ConfigError("FrequencyBand: step must divide Q so nodes reach 2Q");
}

std::vector<double> FrequencyBand::nodes() const {
  const int count = static_cast<int>(std::round(q / step));
  std::vector<double> out(count + 1);
  for (int i = 0; i <= count; ++i) out[i] = q + i * step;
  return out;
}

void check_frequency_budget(const Grid& grid, double max_frequency) {
  const double budget = 0.5 * grid.nyquist();
  if (max_frequency > budget) {
    std::ostringstream os;
    os << "frequency budget exceeded: " << max_frequency << " > 0.5 * pi / h = "
       << budget << "; refine the grid or shrink the band";
    throw ConfigError(os.str());
  }
}

Eigen::VectorXcd source_fourier(const gmig::FieldRealization& f, const Point& xi) {
  const Grid& grid = f.grid;
  if (norm(xi, grid.d) > grid.nyquist() * (1.0 + 1e-12))
    throw ConfigError("source_fourier: |xi| beyond the grid Nyquist limit");
  const double hvol = std::pow(grid.spacing(), grid.d);
  const std::size_t nn = grid.node_count();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.ncomp);
  for (std::size_t i = 0; i < nn; ++i) {
    const cdouble phase = std::polar(1.0, -dot(xi, grid.node(i), grid.d));
    for (int c = 0; c < f.ncomp; ++c)
      out(c) += f.values[i * f.ncomp + c] * phase;
  }
  return out * hvol;
}

Eigen::MatrixXcd source_fourier_ray(const gmig::FieldRealization& f,
                                    const Point& xhat,
                                    const std::vector<double>& kappas) {
  const Grid& grid = f.grid;
  check_direction(xhat, grid.d);
  if (kappas.empty()) return Eigen::MatrixXcd(f.ncomp, 0);
  double kmax = 0.0;
  for (double k : kappas) kmax = std::max(kmax, std::abs(k));
  if (kmax > grid.nyquist() * (1.0 + 1e-12))
    throw ConfigError("source_fourier_ray: frequency beyond the grid Nyquist limit");

  const int n = grid.n;
  const double h = grid.spacing();
  const double hvol = std::pow(h, grid.d);
  const auto nk = static_cast<Eigen::Index>(kappas.size());
  Eigen::MatrixXcd out(f.ncomp, nk);

  // exp(-i kappa xhat . y) factors over the axes of y = h * (j0, j1[, j2]).
  const Eigen::MatrixXcd a = phase_matrix(kappas, xhat[0], h, n);
  const Eigen::MatrixXcd b = phase_matrix(kappas, xhat[1], h, n);

  if (grid.d == 2) {
    Eigen::MatrixXcd field(n, n);
    for (int c = 0; c < f.ncomp; ++c) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          field(i, j) = f.values[grid.index(i, j) * f.ncomp + c];
      const Eigen::MatrixXcd t = field * b.transpose(); // t(j0, l)
      for (Eigen::Index l = 0; l < nk; ++l)
        out(c, l) = hvol * (a.row(l) * t.col(l))(0, 0);
    }
    return out;
  }

  const Eigen::MatrixXcd cm = phase_matrix(kappas, xhat[2], h, n);
  Eigen::MatrixXcd field(n * n, n);
  for (int c = 0; c < f.ncomp; ++c) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          field(i * n + j, k) = f.values[grid.index(i, j, k) * f.ncomp + c];
    const Eigen::MatrixXcd u = field * cm.transpose(); // u(j0*n + j1, l)
    for (Eigen::Index l = 0; l < nk; ++l) {
      const Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>
          slab(u.col(l).data(), n, n);
      // a_l^T slab b_l, plain products so nothing gets conjugated.
      const Eigen::VectorXcd mid = slab * b.row(l).transpose();
      out(c, l) = hvol * (a.row(l) * mid)(0, 0);
    }
  }
  return out;
}

FarFieldRecord farfield(const waves::WaveKind& kind, const gmig::FieldRealization& f,
                        const Point& xhat, double frequency) {
  auto recs = farfield_batch(kind, f, DirectionSet::from_vectors(f.grid.d, {xhat}),
                             {frequency});
  return std::move(recs.front());
}

std::vector<FarFieldRecord> farfield_batch(const waves::WaveKind& kind,
                                           const gmig::FieldRealization& f,
                                           const DirectionSet& dirs,
                                           const std::vector<double>& frequencies) {
  const int d = f.grid.d;
  if (dirs.d != d) throw ConfigError("farfield: direction set dimension mismatch");
  const int want_ncomp = kind.is_vector() ? d : 1;
  if (f.ncomp != want_ncomp)
    throw ConfigError("farfield: field component count does not match wave kind");
  for (double w : frequencies)
    if (!(w > 0.0)) throw ConfigError("farfield: frequency must be positive");

  std::vector<FarFieldRecord> out;
  out.reserve(dirs.size() * frequencies.size());

  const bool elastic = kind.model == waves::Model::Elastic;
  waves::ElasticSpeeds speeds;
  if (elastic) speeds = waves::ElasticSpeeds(kind.lame_lambda, kind.lame_mu);

  for (const Point& xhat : dirs.directions) {
    Eigen::MatrixXcd hat_p, hat_s;
    if (elastic) {
      std::vector<double> kp(frequencies.size()), ks(frequencies.size());
      for (std::size_t i = 0; i < frequencies.size(); ++i) {
        kp[i] = speeds.kappa_p(frequencies[i]);
        ks[i] = speeds.kappa_s(frequencies[i]);
      }
      hat_p = source_fourier_ray(f, xhat, kp);
      hat_s = source_fourier_ray(f, xhat, ks);
    } else {
      hat_p = source_fourier_ray(f, xhat, frequencies);
    }

    Eigen::VectorXd xv(d);
    for (int a = 0; a < d; ++a) xv(a) = xhat[a];
    const Eigen::MatrixXd proj = xv * xv.transpose();
    const Eigen::MatrixXd perp = Eigen::MatrixXd::Identity(d, d) - proj;

    for (std::size_t i = 0; i < frequencies.size(); ++i) {
      const auto pre = waves::farfield_prefactor(kind, d, frequencies[i]);
      FarFieldRecord rec;
      rec.kind = kind;
      rec.direction = xhat;
      rec.frequency = frequencies[i];
      rec.seed = f.seed;
      if (elastic) {
        rec.value = pre.primary * (proj * hat_p.col(i));
        rec.secondary = pre.secondary * (perp * hat_s.col(i));
      } else {
        rec.value = pre.primary * hat_p.col(i);
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

Eigen::VectorXcd nearfield(const waves::WaveKind& kind, const gmig::FieldRealization& f,
                           const Point& x, double frequency) {
  const Grid& grid = f.grid;
  const int d = grid.d;
  const int want_ncomp = kind.is_vector() ? d : 1;
  if (f.ncomp != want_ncomp)
    throw ConfigError("nearfield: field component count does not match wave kind");
  if (!(frequency > 0.0)) throw ConfigError("nearfield: frequency must be positive");

  // Distance from x to the support box [0, L]^d.
  double dist2 = 0.0;
  for (int a = 0; a < d; ++a) {
    const double t = std::max({0.0 - x[a], x[a] - grid.length, 0.0});
    dist2 += t * t;
  }
  if (std::sqrt(dist2) < 2.0 * grid.spacing())
    throw DomainError("nearfield: evaluation point closer than 2h to the support box");

  const double hvol = std::pow(grid.spacing(), d);
  const std::size_t nn = grid.node_count();
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(want_ncomp);

  waves::ElasticSpeeds speeds;
  if (kind.model == waves::Model::Elastic)
    speeds = waves::ElasticSpeeds(kind.lame_lambda, kind.lame_mu);

  for (std::size_t i = 0; i < nn; ++i) {
    const Point y = grid.node(i);
    switch (kind.model) {
      case waves::Model::Acoustic:
        acc(0) -= waves::fundamental_helmholtz(x, y, cdouble{frequency, 0.0}, d) *
                  f.values[i];
        break;
      case waves::Model::Biharmonic:
        acc(0) -= waves::fundamental_biharmonic(x, y, frequency, d) * f.values[i];
        break;
      case waves::Model::Electromagnetic: {
        const cdouble phi =
            waves::fundamental_helmholtz(x, y, cdouble{frequency, 0.0}, d);
        for (int c = 0; c < d; ++c)
          acc(c) += kI * frequency * phi * f.values[i * d + c];
        break;
      }
      case waves::Model::Elastic: {
        const Eigen::MatrixXcd g =
            waves::green_tensor_elastic(x, y, frequency, speeds, d);
        Eigen::VectorXcd fv(d);
        for (int c = 0; c < d; ++c) fv(c) = f.values[i * d + c];
        acc -= g * fv;
        break;
      }
    }
  }
  return acc * hvol;
}

void write_farfield_csv(const std::string& path,
                        const std::vector<FarFieldRecord>& records) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw NumericalError("write_farfield_csv: cannot open " + path);
  std::fputs("kind,seed,xhat0,xhat1,xhat2,frequency,components...\n", out);
  for (const auto& rec : records) {
    std::fprintf(out, "%s,%llu,%.17g,%.17g,%.17g,%.17g",
                 waves::model_name(rec.kind.model),
                 static_cast<unsigned long long>(rec.seed), rec.direction[0],
                 rec.direction[1], rec.direction[2], rec.frequency);
    for (Eigen::Index c = 0; c < rec.value.size(); ++c)
      std::fprintf(out, ",%.17g,%.17g", rec.value(c).real(), rec.value(c).imag());
    for (Eigen::Index c = 0; c < rec.secondary.size(); ++c)
      std::fprintf(out, ",%.17g,%.17g", rec.secondary(c).real(),
                   rec.secondary(c).imag());
    std::fputc('\n', out);
  }
  if (std::fclose(out) != 0)
    throw NumericalError("write_farfield_csv: write failed for " + path);
}

} // namespace wavesrc::forward
