#include "wavesrc/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace wavesrc::fft {

namespace {

std::mutex plan_mutex; // fftw planning is not thread-safe

void transform(const Grid& grid, std::vector<cdouble>& data, int ncomp, int sign) {
  if (data.size() != grid.node_count() * static_cast<std::size_t>(ncomp))
    throw ConfigError("fft: data size does not match grid/ncomp");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  const int n = grid.n;
  int dims[3] = {n, n, n};
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    // Interleaved components: howmany = ncomp, stride = ncomp.
    plan = fftw_plan_many_dft(grid.d, dims, ncomp, ptr, nullptr, ncomp, 1, ptr,
                              nullptr, ncomp, 1, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw NumericalError("fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
}

} // namespace

void backward(const Grid& grid, std::vector<cdouble>& data, int ncomp) {
  transform(grid, data, ncomp, FFTW_BACKWARD);
}

void forward(const Grid& grid, std::vector<cdouble>& data, int ncomp) {
  transform(grid, data, ncomp, FFTW_FORWARD);
}

} // namespace wavesrc::fft
