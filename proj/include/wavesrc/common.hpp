#ifndef WAVESRC_COMMON_HPP
#define WAVESRC_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace wavesrc {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr std::complex<double> kI{0.0, 1.0};

/// Precondition or domain violation (singular point, out-of-range argument).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Invalid configuration (bad grid, inadmissible strengths, infeasible band).
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Failure detected during a numerical stage.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wavesrc

#endif
