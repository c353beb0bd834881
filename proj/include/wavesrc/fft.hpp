#ifndef WAVESRC_FFT_HPP
#define WAVESRC_FFT_HPP

#include <vector>

#include "wavesrc/common.hpp"
#include "wavesrc/grid.hpp"

namespace wavesrc::fft {

/// Unnormalized backward DFT (exp(+i xi . x) synthesis) over the grid's
/// full lattice, in place. data is row-major with `ncomp` interleaved
/// components per node; each component is transformed independently.
void backward(const Grid& grid, std::vector<cdouble>& data, int ncomp = 1);

/// Unnormalized forward DFT (exp(-i xi . x) analysis), in place.
void forward(const Grid& grid, std::vector<cdouble>& data, int ncomp = 1);

} // namespace wavesrc::fft

#endif
