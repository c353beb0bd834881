#ifndef WAVESRC_WAVES_HPP
#define WAVESRC_WAVES_HPP

#include <Eigen/Dense>

#include "wavesrc/common.hpp"
#include "wavesrc/grid.hpp"

namespace wavesrc::waves {

enum class Model { Acoustic, Biharmonic, Electromagnetic, Elastic };

/// Wave model tag. Lame parameters are meaningful for Elastic only and must
/// satisfy strong ellipticity (mu > 0, lambda + 2 mu > 0).
struct WaveKind {
  Model model = Model::Acoustic;
  double lame_lambda = 0.0;
  double lame_mu = 1.0;

  static WaveKind acoustic() { return {Model::Acoustic, 0.0, 1.0}; }
  static WaveKind biharmonic() { return {Model::Biharmonic, 0.0, 1.0}; }
  static WaveKind electromagnetic() { return {Model::Electromagnetic, 0.0, 1.0}; }
  static WaveKind elastic(double lambda, double mu) {
    if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
      throw ConfigError("WaveKind: elastic requires mu > 0 and lambda + 2 mu > 0");
    return {Model::Elastic, lambda, mu};
  }

  bool is_vector() const {
    return model == Model::Electromagnetic || model == Model::Elastic;
  }
};

const char* model_name(Model m);
Model model_from_name(const std::string& name);

/// Compressional and shear slownesses/wavenumbers. Only positivity is
/// guaranteed; no ordering between c_p and c_s is assumed.
struct ElasticSpeeds {
  double c_p = 0.0;
  double c_s = 0.0;

  ElasticSpeeds() = default;
  ElasticSpeeds(double lambda, double mu)
      : c_p(1.0 / std::sqrt(lambda + 2.0 * mu)), c_s(1.0 / std::sqrt(mu)) {
    if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
      throw ConfigError("ElasticSpeeds: requires mu > 0 and lambda + 2 mu > 0");
  }

  double kappa_p(double omega) const { return c_p * omega; }
  double kappa_s(double omega) const { return c_s * omega; }
};

/// Far-field radiation constant C_d: e^{i pi/4}/sqrt(8 pi) in 2-D, 1/(4 pi) in 3-D.
cdouble radiation_constant(int d);

/// Outgoing Helmholtz fundamental solution Phi_d. kappa may be real positive
/// or purely imaginary i*t (t > 0); the latter is evaluated through K0 /
/// a real exponential so no branch of H0 at complex argument is involved.
cdouble fundamental_helmholtz(const Point& x, const Point& y, cdouble kappa, int d);

/// Biharmonic fundamental solution F_d = (Phi_d(kappa) - Phi_d(i kappa)) / (2 kappa^2).
/// Below r = 1e-6 * wavelength the analytically continuous limit is returned
/// via a truncated series of the numerator.
cdouble fundamental_biharmonic(const Point& x, const Point& y, double kappa, int d);

/// Elastic Green tensor, closed-form radial-derivative Hessian (d x d).
Eigen::MatrixXcd green_tensor_elastic(const Point& x, const Point& y, double omega,
                                      const ElasticSpeeds& speeds, int d);

/// Scalar multiplier in front of the Fourier integral of the far-field
/// pattern. Elastic carries the (compressional, shear) pair.
struct FarfieldPrefactor {
  cdouble primary;        // acoustic/biharmonic/EM value, or compressional
  cdouble secondary;      // shear (elastic only)
  bool has_pair = false;
  double kappa_power = 0.0; // exponent of the frequency factor inside `primary`
};

FarfieldPrefactor farfield_prefactor(const WaveKind& kind, int d, double frequency);

/// Radial value/derivatives of Phi_d at separation r, real kappa > 0.
struct RadialDerivs {
  cdouble value, d1, d2;
};
RadialDerivs helmholtz_radial_derivs(double r, double kappa, int d);

} // namespace wavesrc::waves

#endif
