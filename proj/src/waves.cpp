#include "wavesrc/waves.hpp"

#include <cmath>

#include "wavesrc/special.hpp"

namespace wavesrc::waves {

namespace {

double separation(const Point& x, const Point& y, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = x[i] - y[i];
    s += t * t;
  }
  return std::sqrt(s);
}

constexpr double kEulerGamma = 0.57721566490153286061;

// Series limit of Phi_d(kappa) - Phi_d(i kappa) for u = kappa*r -> 0.
cdouble biharmonic_numerator_series(double r, double kappa, int d) {
  if (d == 3) {
    // (e^{i u} - e^{-u})/(4 pi r) = (kappa/4pi) sum_k (i^k - (-1)^k) u^{k-1}/k!
    cdouble sum = 0.0;
    cdouble ik{1.0, 0.0};
    double sign = 1.0, fact = 1.0;
    double upow = 1.0; // u^{k-1}
    const double u = kappa * r;
    for (int k = 1; k <= 6; ++k) {
      ik *= kI;
      sign = -sign;
      fact *= k;
      sum += (ik - sign) * upow / fact;
      upow *= u;
    }
    return kappa / (4.0 * kPi) * sum;
  }
  // d == 2: (i/4) J0(u) + (1/pi) sum_{k odd} (log(u/2)+gamma-H_k) p^k/(k!)^2
  const double u = kappa * r;
  const double p = 0.25 * u * u;
  const double logfac =
      (u > 0.0) ? std::log(0.5 * u) + kEulerGamma : 0.0; // p^k kills the log at r=0
  const double j0 = 1.0 - p + p * p / 4.0;
  double odd = 0.0;
  if (u > 0.0) {
    odd += (logfac - 1.0) * p;                  // k = 1, H_1 = 1
    odd += (logfac - 11.0 / 6.0) * p * p * p / 36.0; // k = 3, H_3 = 11/6
  }
  return cdouble{0.0, 0.25} * j0 + odd / kPi;
}

} // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::Acoustic: return "acoustic";
    case Model::Biharmonic: return "biharmonic";
    case Model::Electromagnetic: return "electromagnetic";
    case Model::Elastic: return "elastic";
  }
  return "?";
}

Model model_from_name(const std::string& name) {
  if (name == "acoustic") return Model::Acoustic;
  if (name == "biharmonic") return Model::Biharmonic;
  if (name == "electromagnetic" || name == "maxwell") return Model::Electromagnetic;
  if (name == "elastic") return Model::Elastic;
  throw ConfigError("unknown wave model: " + name);
}

cdouble radiation_constant(int d) {
  if (d == 2) return std::exp(kI * (kPi / 4.0)) / std::sqrt(8.0 * kPi);
  if (d == 3) return cdouble{1.0 / (4.0 * kPi), 0.0};
  throw ConfigError("radiation_constant: d must be 2 or 3");
}

cdouble fundamental_helmholtz(const Point& x, const Point& y, cdouble kappa, int d) {
  const double r = separation(x, y, d);
  if (r == 0.0)
    throw DomainError("fundamental_helmholtz: singular at x = y");
  if (kappa == cdouble{0.0, 0.0})
    throw DomainError("fundamental_helmholtz: kappa must be nonzero");
  if (d == 3)
    return std::exp(kI * kappa * r) / (4.0 * kPi * r);
  if (kappa.real() == 0.0 && kappa.imag() > 0.0) {
    // Phi_2(x,y,i t) = K0(t r)/(2 pi) via H0^{(1)}(i s) = (2/(i pi)) K0(s).
    return special::bessel_k0(kappa.imag() * r) / (2.0 * kPi);
  }
  return 0.25 * kI * special::hankel1_0(kappa * r);
}

cdouble fundamental_biharmonic(const Point& x, const Point& y, double kappa, int d) {
  const double r = separation(x, y, d);
  if (!(kappa > 0.0))
    throw DomainError("fundamental_biharmonic: kappa must be positive");
  const double eps_r = 1e-6 * (2.0 * kPi / kappa);
  if (r < eps_r)
    return biharmonic_numerator_series(r, kappa, d) / (2.0 * kappa * kappa);
  const cdouble num = fundamental_helmholtz(x, y, cdouble{kappa, 0.0}, d) -
                      fundamental_helmholtz(x, y, cdouble{0.0, kappa}, d);
  return num / (2.0 * kappa * kappa);
}

RadialDerivs helmholtz_radial_derivs(double r, double kappa, int d) {
  if (!(r > 0.0)) throw DomainError("helmholtz_radial_derivs: requires r > 0");
  if (d == 3) {
    const cdouble phi = std::exp(kI * kappa * r) / (4.0 * kPi * r);
    const cdouble a = kI * kappa - 1.0 / r;
    return {phi, phi * a, phi * (a * a + 1.0 / (r * r))};
  }
  const cdouble h0 = special::hankel1_0(cdouble{kappa * r, 0.0});
  const cdouble h1 = special::hankel1_1(cdouble{kappa * r, 0.0});
  const cdouble phi = 0.25 * kI * h0;
  const cdouble d1 = -0.25 * kI * kappa * h1;
  const cdouble d2 = -0.25 * kI * kappa * kappa * (h0 - h1 / (kappa * r));
  return {phi, d1, d2};
}

Eigen::MatrixXcd green_tensor_elastic(const Point& x, const Point& y, double omega,
                                      const ElasticSpeeds& speeds, int d) {
  const double r = separation(x, y, d);
  if (r == 0.0)
    throw DomainError("green_tensor_elastic: singular at x = y");
  if (!(omega > 0.0))
    throw DomainError("green_tensor_elastic: omega must be positive");

  const double mu = 1.0 / (speeds.c_s * speeds.c_s);
  const RadialDerivs s = helmholtz_radial_derivs(r, speeds.kappa_s(omega), d);
  const RadialDerivs p = helmholtz_radial_derivs(r, speeds.kappa_p(omega), d);
  const cdouble psi1 = s.d1 - p.d1;
  const cdouble psi2 = s.d2 - p.d2;

  Eigen::VectorXd rhat(d);
  for (int i = 0; i < d; ++i) rhat(i) = (x[i] - y[i]) / r;

  // Hessian of a radial function: psi'' rhat rhat^T + (psi'/r)(I - rhat rhat^T)
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  const Eigen::MatrixXd proj = rhat * rhat.transpose();
  const Eigen::MatrixXd perp = Eigen::MatrixXd::Identity(d, d) - proj;
  g = (s.value / mu) * Eigen::MatrixXcd::Identity(d, d);
  g += (1.0 / (omega * omega)) * (psi2 * proj + (psi1 / r) * perp);
  return g;
}

FarfieldPrefactor farfield_prefactor(const WaveKind& kind, int d, double frequency) {
  if (!(frequency > 0.0))
    throw DomainError("farfield_prefactor: frequency must be positive");
  const cdouble cd = radiation_constant(d);
  FarfieldPrefactor out;
  switch (kind.model) {
    case Model::Acoustic:
      out.kappa_power = 0.5 * (d - 3);
      out.primary = -cd * std::pow(frequency, out.kappa_power);
      break;
    case Model::Biharmonic:
      out.kappa_power = 0.5 * (d - 7);
      out.primary = -0.5 * cd * std::pow(frequency, out.kappa_power);
      break;
    case Model::Electromagnetic:
      if (d != 3)
        throw ConfigError("farfield_prefactor: electromagnetic requires d = 3");
      out.kappa_power = 1.0;
      out.primary = kI * frequency * cd;
      break;
    case Model::Elastic: {
      const ElasticSpeeds sp(kind.lame_lambda, kind.lame_mu);
      out.kappa_power = 0.5 * (d - 3);
      const double wpow = std::pow(frequency, out.kappa_power);
      out.primary = -cd * std::pow(sp.c_p, 0.5 * (d + 1)) * wpow;
      out.secondary = -cd * std::pow(sp.c_s, 0.5 * (d + 1)) * wpow;
      out.has_pair = true;
      break;
    }
  }
  return out;
}

} // namespace wavesrc::waves
