#pragma once

// RAII wrapper over FFTW in-place complex transforms. Plans use
// FFTW_ESTIMATE so planning is deterministic and never overwrites data.

#include <fftw3.h>

#include <complex>
#include <memory>
#include <vector>

namespace qmbh::detail {

class FftPlan {
 public:
  /// 2-D (n x n) when `two_d`, otherwise 1-D of length n, over `buffer`.
  FftPlan(std::vector<std::complex<double>>& buffer, std::size_t n, bool two_d, int sign) {
    auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
    const int ni = static_cast<int>(n);
    plan_ = two_d ? fftw_plan_dft_2d(ni, ni, data, data, sign, FFTW_ESTIMATE)
                  : fftw_plan_dft_1d(ni, data, data, sign, FFTW_ESTIMATE);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() { fftw_destroy_plan(plan_); }

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

/// Angular wavenumber of FFT bin i for n points at spacing dx.
inline double wavenumber(std::size_t i, std::size_t n, double dx) {
  const double twopi = 6.283185307179586476925286766559;
  const long j = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
  return twopi * static_cast<double>(j) / (static_cast<double>(n) * dx);
}

}  // namespace qmbh::detail
