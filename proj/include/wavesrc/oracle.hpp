#ifndef WAVESRC_ORACLE_HPP
#define WAVESRC_ORACLE_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "wavesrc/gmig.hpp"
#include "wavesrc/waves.hpp"

// Brute-force reference implementations for cross-validation. Everything here
// is deliberately independent of the production paths: naive lattice DFTs
// instead of FFTW, its own normal generator, dense algebra throughout. Only
// meant for coarse grids.
namespace wavesrc::oracle {

/// Largest per-axis node count the dense oracles accept (40^d pairs).
inline constexpr int kMaxOracleNodesPerAxis = 40;

/// Dense covariance/relation kernels over all node pairs of a coarse grid.
/// dim = 1 (scalar) or d (vector); row/column index = node * dim + component.
struct DenseKernelPair {
  Grid grid;
  int dim = 1;
  double order_m = 2.0;
  double delta = 0.0;
  Eigen::MatrixXcd k_c; // Hermitian PSD
  Eigen::MatrixXcd k_r; // symmetric
};

/// Stationary factor G on the periodic offset lattice, by naive summation of
/// the regularized spectral density over the grid's frequency lattice.
/// Entry `flat` is G at displacement grid.node(flat); G is real and even.
std::vector<double> stationary_covariance_lattice(const Grid& grid, double m,
                                                  double delta);

DenseKernelPair dense_kernels(const gmig::ScalarStrengthPair& strengths,
                              double delta);
DenseKernelPair dense_kernels(const gmig::MatrixStrengthPair& strengths,
                              double delta);

/// Exact Gaussian draw with the given dense kernels, via an eigendecomposition
/// square root of the augmented real covariance. Refuses indefinite inputs
/// (eigenvalues below -1e-10 * trace).
gmig::FieldRealization cholesky_sample(const DenseKernelPair& kernels,
                                       std::uint64_t seed);

/// Direct double-loop far-field summation; no FFT, no ray batching. For
/// elastic kinds fills `secondary` with the shear pattern, assembling the
/// polarization vectors componentwise.
Eigen::VectorXcd brute_force_farfield(const waves::WaveKind& kind,
                                      const gmig::FieldRealization& f,
                                      const Point& xhat, double frequency,
                                      Eigen::VectorXcd* secondary = nullptr);

} // namespace wavesrc::oracle

#endif
