#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

namespace majsim::detail {

// Unnormalized in-place 1-D DFT through FFTW.
//   sign = +1: out_j = sum_n in_n e^{+2 pi i n j / N}
//   sign = -1: out_j = sum_n in_n e^{-2 pi i n j / N}
// FFTW's planner is not thread-safe; plans are created on the calling thread.
class Dft {
 public:
  Dft(std::vector<std::complex<double>>& data, int sign)
      : plan_(fftw_plan_dft_1d(static_cast<int>(data.size()),
                               reinterpret_cast<fftw_complex*>(data.data()),
                               reinterpret_cast<fftw_complex*>(data.data()),
                               sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE)) {}
  ~Dft() { fftw_destroy_plan(plan_); }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  void execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace majsim::detail
