#include "qmbh/dirac.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmbh/error.hpp"

namespace qmbh::dirac {

namespace {

double energy(const DiracPacket1D& p, double k) {
  return std::hypot(p.c * p.hbar * k, p.mass * p.c * p.c);
}

// Sixth-order centred first derivative of each spinor component.
std::vector<Spinor> derivative(const DiracPacket1D& p) {
  static constexpr double w[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  const std::size_t n = p.a.size();
  std::vector<Spinor> d(n);
  auto at = [&](long i, int comp) -> cplx {
    if (i < 0 || i >= static_cast<long>(n)) return {0.0, 0.0};
    return p.a[static_cast<std::size_t>(i)][comp];
  };
  for (std::size_t j = 0; j < n; ++j) {
    const long i = static_cast<long>(j);
    for (int comp = 0; comp < 2; ++comp) {
      cplx s = 0.0;
      for (int m = 1; m <= 3; ++m) s += w[m - 1] * (at(i + m, comp) - at(i - m, comp));
      d[j][comp] = s / p.dk;
    }
  }
  return d;
}

}  // namespace

double DiracPacket1D::norm() const {
  numeric::CompensatedSum s;
  for (const auto& v : a) s.add(std::norm(v[0]) + std::norm(v[1]));
  return s.value() * dk;
}

void DiracPacket1D::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw PreconditionError("cannot normalize an empty packet");
  const double f = 1.0 / std::sqrt(nrm);
  for (auto& v : a) {
    v[0] *= f;
    v[1] *= f;
  }
}

void validate(const DiracPacket1D& p) {
  const std::size_t n = p.k.size();
  if (n < 256 || (n & (n - 1)) != 0) {
    throw PreconditionError("momentum grid must have a power-of-two size >= 256");
  }
  if (p.a.size() != n) throw PreconditionError("amplitude count != momentum grid size");
  if (!(p.dk > 0.0) || !(p.mass > 0.0) || !(p.c > 0.0) || !(p.hbar > 0.0)) {
    throw PreconditionError("dk, mass, c and hbar must be positive");
  }
}

DiracPacket1D build_gaussian(double sigma_x, double x0, double p0, Spinor seed,
                             std::size_t points, double mass, double c, double hbar) {
  if (!(sigma_x > 0.0) || !std::isfinite(sigma_x)) {
    throw PreconditionError("packet width must be positive and finite");
  }
  if (std::norm(seed[0]) + std::norm(seed[1]) == 0.0) {
    throw PreconditionError("seed spinor must be nonzero");
  }
  DiracPacket1D p;
  p.mass = mass;
  p.c = c;
  p.hbar = hbar;
  const double k0 = p0 / hbar;
  const double sigma_k = 1.0 / (2.0 * sigma_x);
  const double half = 16.0 * sigma_k;
  p.dk = 2.0 * half / static_cast<double>(points);
  p.k.resize(points);
  p.a.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double k = k0 - half + p.dk * static_cast<double>(j);
    p.k[j] = k;
    const cplx env = std::exp(-sigma_x * sigma_x * (k - k0) * (k - k0)) * std::polar(1.0, -k * x0);
    p.a[j] = {seed[0] * env, seed[1] * env};
  }
  validate(p);
  p.normalize();
  return p;
}

std::pair<Spinor, Spinor> branch_vectors(const DiracPacket1D& p, double k) {
  // H = E (cos(theta) sigma_3 + sin(theta) sigma_1).
  const double theta = std::atan2(p.c * p.hbar * k, p.mass * p.c * p.c);
  const double ch = std::cos(0.5 * theta), sh = std::sin(0.5 * theta);
  return {Spinor{ch, sh}, Spinor{-sh, ch}};
}

DiracPacket1D project_positive(const DiracPacket1D& p) {
  validate(p);
  DiracPacket1D out = p;
  for (std::size_t j = 0; j < p.k.size(); ++j) {
    const auto [u, v] = branch_vectors(p, p.k[j]);
    (void)v;
    const cplx amp = std::conj(u[0]) * p.a[j][0] + std::conj(u[1]) * p.a[j][1];
    out.a[j] = {amp * u[0], amp * u[1]};
  }
  out.normalize();
  return out;
}

EnergySplit energy_fractions(const DiracPacket1D& p) {
  validate(p);
  numeric::CompensatedSum plus, minus;
  for (std::size_t j = 0; j < p.k.size(); ++j) {
    const auto [u, v] = branch_vectors(p, p.k[j]);
    const cplx ap = std::conj(u[0]) * p.a[j][0] + std::conj(u[1]) * p.a[j][1];
    const cplx am = std::conj(v[0]) * p.a[j][0] + std::conj(v[1]) * p.a[j][1];
    plus.add(std::norm(ap));
    minus.add(std::norm(am));
  }
  const double total = plus.value() + minus.value();
  return {plus.value() / total, minus.value() / total};
}

DiracPacket1D evolve(const DiracPacket1D& p, double t) {
  validate(p);
  DiracPacket1D out = p;
  for (std::size_t j = 0; j < p.k.size(); ++j) {
    const double e = energy(p, p.k[j]);
    const double hx = p.c * p.hbar * p.k[j] / e;  // sigma_1 weight of H/E
    const double hz = p.mass * p.c * p.c / e;     // sigma_3 weight of H/E
    const double phase = e * t / p.hbar;
    const cplx cs = std::cos(phase);
    const cplx isn = cplx(0.0, -std::sin(phase));
    const Spinor& a = p.a[j];
    out.a[j][0] = cs * a[0] + isn * (hz * a[0] + hx * a[1]);
    out.a[j][1] = cs * a[1] + isn * (hx * a[0] - hz * a[1]);
  }
  return out;
}

double mean_position(const DiracPacket1D& p) {
  const auto d = derivative(p);
  numeric::CompensatedSum s;
  for (std::size_t j = 0; j < p.a.size(); ++j) {
    const cplx v = std::conj(p.a[j][0]) * d[j][0] + std::conj(p.a[j][1]) * d[j][1];
    s.add((cplx(0.0, 1.0) * v).real());
  }
  return s.value() * p.dk / p.norm();
}

double mean_velocity(const DiracPacket1D& p) {
  numeric::CompensatedSum s;
  for (const auto& v : p.a) s.add(2.0 * (std::conj(v[0]) * v[1]).real());
  return p.c * s.value() * p.dk / p.norm();
}

namespace {

template <class Observable>
ZbwTrace sample_trace(const DiracPacket1D& p, double t_max, std::size_t samples,
                      Observable obs) {
  validate(p);
  if (!(t_max > 0.0)) throw PreconditionError("t_max must be positive");
  if (samples < 8) throw PreconditionError("need at least 8 trace samples");
  ZbwTrace tr;
  tr.t = numeric::linspace(0.0, t_max, samples);
  tr.x.reserve(samples);
  for (double t : tr.t) tr.x.push_back(obs(evolve(p, t)));
  tr.fit = numeric::fit_sinusoid(tr.t, tr.x);
  return tr;
}

}  // namespace

ZbwTrace mean_position_trace(const DiracPacket1D& p, double t_max, std::size_t samples) {
  return sample_trace(p, t_max, samples, [](const DiracPacket1D& q) { return mean_position(q); });
}

ZbwTrace velocity_trace(const DiracPacket1D& p, double t_max, std::size_t samples) {
  return sample_trace(p, t_max, samples, [](const DiracPacket1D& q) { return mean_velocity(q); });
}

ZbwTrace time_average(const ZbwTrace& trace, double T) {
  const std::size_t n = trace.t.size();
  if (n < 2) throw PreconditionError("trace too short to average");
  if (!(T > 0.0)) throw PreconditionError("averaging window must be positive");
  const double t_span = trace.t.back() - trace.t.front();
  if (!(T < t_span / 4.0)) throw PreconditionError("averaging window must be < t_max / 4");
  const double dt = t_span / static_cast<double>(n - 1);
  const auto h = static_cast<std::size_t>(std::lround(0.5 * T / dt));
  if (h == 0) return trace;

  ZbwTrace out;
  for (std::size_t i = h; i + h < n; ++i) {
    numeric::CompensatedSum s;
    for (std::size_t j = i - h; j <= i + h; ++j) {
      const double w = (j == i - h || j == i + h) ? 0.5 : 1.0;
      s.add(w * trace.x[j]);
    }
    out.t.push_back(trace.t[i]);
    out.x.push_back(s.value() / static_cast<double>(2 * h));
  }
  out.fit = numeric::fit_sinusoid(out.t, out.x);
  return out;
}

InterferenceProfile interference_density(const DiracPacket1D& p) {
  validate(p);
  const std::size_t n = p.k.size();
  InterferenceProfile out;
  const double dx = 2.0 * std::numbers::pi / (static_cast<double>(n) * p.dk);
  // Split into branches per k.
  std::vector<Spinor> plus(n), minus(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [u, v] = branch_vectors(p, p.k[j]);
    const cplx ap = std::conj(u[0]) * p.a[j][0] + std::conj(u[1]) * p.a[j][1];
    const cplx am = std::conj(v[0]) * p.a[j][0] + std::conj(v[1]) * p.a[j][1];
    plus[j] = {ap * u[0], ap * u[1]};
    minus[j] = {am * v[0], am * v[1]};
  }
  const double pref = p.dk / std::sqrt(2.0 * std::numbers::pi);
  numeric::CompensatedSum integral;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) - 0.5 * n) * dx;
    Spinor sp{0.0, 0.0}, sm{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const cplx ph = std::polar(pref, p.k[j] * x);
      sp[0] += plus[j][0] * ph;
      sp[1] += plus[j][1] * ph;
      sm[0] += minus[j][0] * ph;
      sm[1] += minus[j][1] * ph;
    }
    const double rho = 2.0 * (std::conj(sp[0]) * sm[0] + std::conj(sp[1]) * sm[1]).real();
    out.x.push_back(x);
    out.density.push_back(rho);
    integral.add(rho * dx);
    out.max_abs = std::max(out.max_abs, std::abs(rho));
  }
  out.integral = integral.value();
  return out;
}

double disc_radius(double angular_momentum, double mass, double c) {
  if (!(mass > 0.0)) throw PreconditionError("disc radius needs positive mass");
  return angular_momentum / (mass * c);
}

std::array<double, 2> velocity_eigenvalues(double c) {
  Eigen::Matrix2d v;
  v << 0.0, c, c, 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(v);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

}  // namespace qmbh::dirac
