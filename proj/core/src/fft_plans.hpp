#pragma once

#include <fftw3.h>

#include <array>
#include <cstddef>

namespace qhd::detail {

/// In-place forward/backward complex plans for one grid shape. Execution via
/// fftw_execute_dft is thread-safe; creation is serialized in make_grid.
struct FftPlans {
  FftPlans(int dim, std::size_t n);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(fftw_complex* data) const { fftw_execute_dft(forward_plan, data, data); }
  void backward(fftw_complex* data) const { fftw_execute_dft(backward_plan, data, data); }

  fftw_plan forward_plan = nullptr;
  fftw_plan backward_plan = nullptr;
};

}  // namespace qhd::detail
