#pragma once

// Small numerical helpers shared across modules.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace qmbh::numeric {

/// Neumaier-compensated running sum. Summation order still matters for the
/// last bit, so callers reduce in a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// Wraps an angle difference into (-period/2, period/2].
inline double wrap(double d, double period = 2.0 * std::numbers::pi) {
  const double half = 0.5 * period;
  double r = std::remainder(d, period);  // in [-half, half]
  if (r <= -half) r += period;
  return r;
}

/// Ordinary least squares: columns of `design` (row-major rows x cols).
/// Returns coefficients and writes the RMS residual if requested.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  std::span<const double> y, double* rms_residual = nullptr);

/// Slope of log|y| against log x by least squares.
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Fit of y(t) = offset + slope t + amplitude sin(omega t + phase).
struct SinusoidFit {
  double offset = 0.0;
  double slope = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double residual = 0.0;  ///< RMS residual
  bool ok = false;        ///< residual <= 10% of amplitude
};

/// Nonlinear fit: periodogram peak of the detrended signal, then golden-section
/// refinement of omega with the linear parameters solved exactly at each trial.
/// `omega_max` caps the search (defaults to the sampling Nyquist frequency).
SinusoidFit fit_sinusoid(std::span<const double> t, std::span<const double> y,
                         double omega_max = 0.0);

/// Equally spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);
/// Logarithmically spaced values from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace qmbh::numeric
