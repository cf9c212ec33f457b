#include "qmbh/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

#include "qmbh/error.hpp"

namespace qmbh::numeric {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                  std::span<const double> y, double* rms_residual) {
  if (rows.empty() || rows.size() != y.size()) {
    throw PreconditionError("least_squares: design/observation size mismatch");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.front().size());
  if (n < m) throw PreconditionError("least_squares: underdetermined system");
  Eigen::MatrixXd a(n, m);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = rows[i][j];
    b(i) = y[i];
  }
  // Column scaling keeps the QR well conditioned when basis magnitudes differ.
  Eigen::VectorXd scale(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    scale(j) = a.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  if (rms_residual) {
    *rms_residual = std::sqrt((a * x - b).squaredNorm() / static_cast<double>(n));
  }
  std::vector<double> out(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) out[j] = x(j) / scale(j);
  return out;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<std::vector<double>> rows;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rows.push_back({1.0, std::log(x[i])});
    ly.push_back(std::log(std::abs(y[i])));
  }
  return least_squares(rows, ly)[1];
}

namespace {

struct Linear {
  std::vector<double> coef;  // offset, slope, s, c
  double rms = 0.0;
};

Linear fit_at(std::span<const double> t, std::span<const double> y, double omega) {
  std::vector<std::vector<double>> rows;
  rows.reserve(t.size());
  for (double ti : t) {
    rows.push_back({1.0, ti, std::sin(omega * ti), std::cos(omega * ti)});
  }
  Linear l;
  l.coef = least_squares(rows, y, &l.rms);
  return l;
}

}  // namespace

SinusoidFit fit_sinusoid(std::span<const double> t, std::span<const double> y,
                         double omega_max) {
  const std::size_t n = t.size();
  if (n < 8 || y.size() != n) throw PreconditionError("fit_sinusoid: need >= 8 samples");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw PreconditionError("fit_sinusoid: times must increase");
  const double dt = span / static_cast<double>(n - 1);
  const double nyquist = std::numbers::pi / dt;
  if (omega_max <= 0.0 || omega_max > nyquist) omega_max = nyquist;

  // Detrend, then scan a periodogram at quarter-bin resolution.
  std::vector<std::vector<double>> rows;
  for (double ti : t) rows.push_back({1.0, ti});
  const auto trend = least_squares(rows, y);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - trend[0] - trend[1] * t[i];

  const double bin = 2.0 * std::numbers::pi / span;
  const double step = 0.25 * bin;
  double best_omega = bin;
  double best_power = -1.0;
  for (double w = bin; w <= omega_max; w += step) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += r[i] * std::sin(w * t[i]);
      c += r[i] * std::cos(w * t[i]);
    }
    const double p = s * s + c * c;
    if (p > best_power) {
      best_power = p;
      best_omega = w;
    }
  }

  // Golden-section refinement on the full linear-in-parameters residual.
  double lo = std::max(0.5 * bin, best_omega - step);
  double hi = std::min(omega_max, best_omega + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = fit_at(t, y, x1).rms, f2 = fit_at(t, y, x2).rms;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = fit_at(t, y, x1).rms;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = fit_at(t, y, x2).rms;
    }
  }
  const double omega = 0.5 * (lo + hi);
  const Linear l = fit_at(t, y, omega);

  SinusoidFit f;
  f.offset = l.coef[0];
  f.slope = l.coef[1];
  f.amplitude = std::hypot(l.coef[2], l.coef[3]);
  f.omega = omega;
  // a sin(wt) + b cos(wt) = A sin(wt + phase)
  f.phase = std::atan2(l.coef[3], l.coef[2]);
  f.residual = l.rms;
  f.ok = f.residual <= 0.1 * f.amplitude;
  return f;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : v) x = std::exp(x);
  if (n > 1) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

}  // namespace qmbh::numeric
