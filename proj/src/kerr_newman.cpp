#include "qmbh/kerr_newman.hpp"

#include <algorithm>
#include <cmath>

#include "qmbh/error.hpp"

namespace qmbh::kerr_newman {

KNParams KNParams::from_particle(const constants::ParticleSpec& p,
                                 const constants::Constants& k) {
  if (!(p.mass > 0.0)) throw MasslessParticleError(p.name);
  return {p.mass, p.charge, p.spin * k.hbar, k};
}

KNParams KNParams::geometrized(double M_star, double Q_star, double a_star) {
  const auto unit = constants::Constants::unit();
  return {M_star, Q_star, a_star * M_star, unit};
}

void validate(const KNParams& p) {
  if (!(p.mass > 0.0)) throw PreconditionError("Kerr-Newman mass must be positive");
  if (!std::isfinite(p.charge) || !std::isfinite(p.angular_momentum)) {
    throw PreconditionError("Kerr-Newman charge and angular momentum must be finite");
  }
}

HorizonResult horizons(const KNParams& p) {
  validate(p);
  const double m = p.M_star(), q = p.Q_star(), a = p.a_star();
  const double radicand = m * m - q * q - a * a;
  const cplx root = std::sqrt(cplx(radicand, 0.0));
  HorizonResult h;
  h.r_plus = m + root;
  h.r_minus = m - root;
  h.naked = radicand < 0.0;
  h.b = h.naked ? std::sqrt(q * q + a * a - m * m) : std::nan("");
  return h;
}

FarFieldSample far_fields(const KNParams& p, double r, double theta) {
  validate(p);
  const double a = p.a_star();
  const double near = 100.0 * std::max(std::abs(a), p.M_star());
  if (!(r >= near)) throw PreconditionError("far_fields: r lies in the near zone");
  FarFieldSample s;
  s.r = r;
  s.theta = theta;
  s.phi = -p.k.G * p.mass / r;
  s.E_r = p.charge / (r * r);
  const double r3 = r * r * r;
  s.B_r = 2.0 * p.charge * a * std::cos(theta) / r3;
  s.B_theta = p.charge * a * std::sin(theta) / r3;
  return s;
}

double g_factor(const KNParams& p) {
  validate(p);
  if (!(p.angular_momentum > 0.0)) throw PreconditionError("g_factor needs L > 0");
  if (p.charge == 0.0) throw PreconditionError("g_factor needs Q != 0");
  const double r = 1e3 * std::max(std::abs(p.a_star()), p.M_star());
  const FarFieldSample pole = far_fields(p, r, 0.0);
  const double moment = 0.5 * pole.B_r * r * r * r;
  return moment / (p.angular_momentum * p.charge / (2.0 * p.mass * p.k.c));
}

StaticLimit static_limit(const KNParams& p, double theta) {
  validate(p);
  const double m = p.M_star(), q = p.Q_star(), ac = p.a_star() * std::cos(theta);
  const double radicand = m * m - q * q - ac * ac;
  return {m + std::sqrt(cplx(radicand, 0.0)), radicand < 0.0};
}

MetricSlice metric_slice(double a, double m, double e, double r, double theta,
                         double lambda) {
  if (!(a > 0.0)) throw PreconditionError("metric_slice: a must be positive");
  if (lambda == 0.0) throw PreconditionError("metric_slice: lambda must be nonzero");
  MetricSlice s;
  const double ct = std::cos(theta), st = std::sin(theta);
  s.delta = r * r - 2.0 * m * r + a * a + m * m + e * e;
  s.rho2 = r * r + a * a * ct * ct;
  // cos(pi/2) is not exactly zero in floating point, so rho^2 is compared
  // against the rounding floor of a^2 cos^2.
  if (s.delta == 0.0 || s.rho2 <= 1e-30 * a * a) {
    throw SingularPointError("metric_slice: Delta or rho^2 vanishes");
  }
  // dphi = (lambda / a) dt on the slice.
  const double dphi = lambda / a;
  const double first = 1.0 - a * st * st * dphi;
  const double second = (r * r + a * a) * dphi - a;
  s.dt2 = -s.delta / s.rho2 * first * first + st * st / s.rho2 * second * second;
  s.dr2 = s.rho2 / s.delta;
  // A distant observer's angle phi' sees light speed (a dphi'/dt = 1) when
  // phi' = phi / lambda.
  const double light_speed = 1.0;
  s.doubling = light_speed / lambda;
  return s;
}

}  // namespace qmbh::kerr_newman
