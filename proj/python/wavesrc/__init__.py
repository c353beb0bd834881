"""Random-source wave toolkit.

Thin re-export of the compiled core. See the package README for the
underlying C++ library and the JSON config schema used by run_config.
"""

from _wavesrc import (
    ConfigError,
    FieldRealization,
    Grid,
    MatrixStrengths,
    NumericalError,
    ScalarStrengths,
    band_average,
    circle_directions,
    default_delta,
    farfield,
    invert_polar_fourier,
    normalization_constant,
    run_config,
    sample_scalar,
    sample_vector,
    sphere_directions,
    validate_config,
)

__all__ = [
    "ConfigError",
    "FieldRealization",
    "Grid",
    "MatrixStrengths",
    "NumericalError",
    "ScalarStrengths",
    "band_average",
    "circle_directions",
    "default_delta",
    "farfield",
    "invert_polar_fourier",
    "normalization_constant",
    "run_config",
    "sample_scalar",
    "sample_vector",
    "sphere_directions",
    "validate_config",
]
