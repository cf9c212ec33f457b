#include "qmbh/lin_gravity.hpp"

#include <algorithm>
#include <cmath>

#include "qmbh/error.hpp"
#include "qmbh/numeric.hpp"

namespace qmbh::lin_gravity {

namespace {

double default_radius(double mass, const constants::Constants& k, double radius) {
  if (radius > 0.0) return radius;
  if (!(mass > 0.0)) throw PreconditionError("shell mass must be positive");
  return k.hbar / (2.0 * mass * k.c);
}

double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

}  // namespace

ShellSource ShellSource::ring(double mass, std::size_t elements,
                              const constants::Constants& k, double radius) {
  if (elements < 3) throw PreconditionError("ring needs at least 3 elements");
  ShellSource s;
  s.geometry = Geometry::ring;
  s.mass = mass;
  s.k = k;
  s.radius = default_radius(mass, k, radius);
  const double dm = mass / static_cast<double>(elements);
  for (std::size_t j = 0; j < elements; ++j) {
    const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) /
                      static_cast<double>(elements);
    const double c = std::cos(ph), sn = std::sin(ph);
    s.elements.push_back({{s.radius * c, s.radius * sn, 0.0}, {-sn, c, 0.0}, dm, s.radius});
  }
  validate(s);
  return s;
}

ShellSource ShellSource::sphere(double mass, std::size_t elements,
                                const constants::Constants& k, double radius) {
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(elements))));
  if (side < 4) throw PreconditionError("sphere needs at least 16 elements");
  ShellSource s;
  s.geometry = Geometry::sphere;
  s.mass = mass;
  s.k = k;
  s.radius = default_radius(mass, k, radius);
  // Midpoint rule in theta with sin(theta) area weights, uniform in phi.
  std::vector<double> weight(side);
  numeric::CompensatedSum total;
  for (std::size_t i = 0; i < side; ++i) {
    const double th = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(side);
    weight[i] = std::sin(th);
    total.add(weight[i] * static_cast<double>(side));
  }
  const double unit = mass / total.value();
  for (std::size_t i = 0; i < side; ++i) {
    const double th = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(side);
    const double st = std::sin(th), ct = std::cos(th);
    for (std::size_t j = 0; j < side; ++j) {
      const double ph = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(side);
      const double c = std::cos(ph), sn = std::sin(ph);
      s.elements.push_back({{s.radius * st * c, s.radius * st * sn, s.radius * ct},
                            {-sn, c, 0.0},
                            unit * weight[i],
                            s.radius * st});
    }
  }
  validate(s);
  return s;
}

void validate(const ShellSource& s) {
  if (!(s.radius > 0.0) || !(s.mass > 0.0)) {
    throw PreconditionError("shell radius and mass must be positive");
  }
  if (s.elements.empty()) throw PreconditionError("shell has no elements");
  if (std::abs(mass_integral(s) - s.mass) > 1e-12 * s.mass) {
    throw PreconditionError("shell element masses do not sum to the total mass");
  }
  for (const auto& e : s.elements) {
    const double speed = std::hypot(e.direction[0], e.direction[1], e.direction[2]);
    if (std::abs(speed - 1.0) > 4e-16) throw PreconditionError("element speed is not c");
  }
}

ShellSource scale_masses(const ShellSource& s, double f) {
  ShellSource out = s;
  out.mass *= f;
  for (auto& e : out.elements) e.mass *= f;
  return out;
}

double mass_integral(const ShellSource& s) {
  numeric::CompensatedSum m;
  for (const auto& e : s.elements) m.add(e.mass);
  return m.value();
}

double spin_integral(const ShellSource& s) {
  numeric::CompensatedSum sz;
  const double c = s.speed();
  for (const auto& e : s.elements) {
    const double vx = c * e.direction[0], vy = c * e.direction[1];
    sz.add(e.mass * (e.position[0] * vy - e.position[1] * vx));
  }
  return sz.value();
}

double far_potential(const ShellSource& s, double r, double theta) {
  if (!(r >= 100.0 * s.radius)) throw PreconditionError("far_potential: r lies in the near zone");
  const Vec3 probe{r * std::sin(theta), 0.0, r * std::cos(theta)};
  numeric::CompensatedSum phi;
  for (const auto& e : s.elements) phi.add(-s.k.G * e.mass / distance(probe, e.position));
  return phi.value();
}

ChargeEstimate charge_estimate(const ShellSource& s) {
  validate(s);
  const auto& k = s.k;
  ChargeEstimate out;
  const double omega = s.omega();
  numeric::CompensatedSum sum;
  for (const auto& e : s.elements) sum.add(2.0 * (k.G * e.mass) * k.c * k.c * omega);
  out.a0_times_r = k.hbar * 2.0 * k.c * sum.value();
  out.gm2c5 = k.G * s.mass * s.mass * std::pow(k.c, 5);
  out.ratio_to_ref = out.gm2c5 / (k.esu_ref * k.e);
  out.implied_charge = out.gm2c5 / k.esu_ref;
  const std::string dims = "raw CGS magnitudes; dimensional constant (L/T)^5 not applied";
  out.checks = {
      decades_check("a0r_vs_gm2c5", out.a0_times_r, out.gm2c5, 1.0,
                    "element sum reduces to G m^2 c^5 up to an O(1) factor; " + dims),
      relative_check("gm2c5_over_eprime_e", out.ratio_to_ref, 2.79, 0.05 / 2.79, dims),
      decades_check("implied_charge", out.implied_charge, k.e, 1.5, dims),
  };
  return out;
}

namespace {

// Centred first difference on a possibly nonuniform grid.
double centred(double fm, double f0, double fp, double xm, double x0, double xp) {
  const double hm = x0 - xm, hp = xp - x0;
  return (hm * hm * fp - hp * hp * fm + (hp * hp - hm * hm) * f0) / (hm * hp * (hm + hp));
}

}  // namespace

PotentialField christoffel_potential(const MetricField& field, double hbar) {
  const std::size_t nt = field.t.size(), nr = field.r.size();
  if (nt == 0 || nr < 3 || field.h.size() != nt * nr) {
    throw PreconditionError("metric field needs >= 3 radii and one h per node");
  }
  Eigen::Matrix4d eta = Eigen::Matrix4d::Identity();
  eta(0, 0) = -1.0;
  std::vector<double> logg(nt * nr);
  for (std::size_t i = 0; i < field.h.size(); ++i) {
    if (field.h[i].cwiseAbs().maxCoeff() >= kMaxPerturbation) {
      throw LinearizationDomainError("metric perturbation exceeds the linear regime");
    }
    logg[i] = 0.5 * std::log(std::abs((eta + field.h[i]).determinant()));
  }

  PotentialField out;
  const bool dynamic = nt >= 3;
  const std::size_t t_lo = dynamic ? 1 : 0, t_hi = dynamic ? nt - 1 : nt;
  for (std::size_t it = t_lo; it < t_hi; ++it) out.t.push_back(field.t[it]);
  for (std::size_t ir = 1; ir + 1 < nr; ++ir) out.r.push_back(field.r[ir]);
  for (std::size_t it = t_lo; it < t_hi; ++it) {
    for (std::size_t ir = 1; ir + 1 < nr; ++ir) {
      const auto at = [&](std::size_t a, std::size_t b) { return logg[a * nr + b]; };
      out.A_r.push_back(hbar * centred(at(it, ir - 1), at(it, ir), at(it, ir + 1),
                                       field.r[ir - 1], field.r[ir], field.r[ir + 1]));
      out.A_t.push_back(dynamic ? hbar * centred(at(it - 1, ir), at(it, ir), at(it + 1, ir),
                                                 field.t[it - 1], field.t[it], field.t[it + 1])
                                : 0.0);
    }
  }
  return out;
}

MetricField shell_far_metric(const ShellSource& s, const std::vector<double>& r,
                             const std::vector<double>& t) {
  validate(s);
  const auto& k = s.k;
  MetricField f;
  f.r = r;
  f.t = t;
  f.h.reserve(r.size() * t.size());
  const double rate = 2.0 * s.omega() * (1.0 + k.c);
  for (double ti : t) {
    for (double ri : r) {
      const Vec3 probe{ri, 0.0, 0.0};
      Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
      for (const auto& e : s.elements) {
        // Covariant u = (-1, c n).
        Eigen::Vector4d u(-1.0, k.c * e.direction[0], k.c * e.direction[1],
                          k.c * e.direction[2]);
        h += (4.0 * k.G * e.mass / distance(probe, e.position)) * (u * u.transpose());
      }
      f.h.push_back(h * (1.0 + rate * ti));
    }
  }
  return f;
}

WeylFields weyl_em_fields(const GaugeGrid& g) {
  if (g.nt < 5 || g.nx < 5 || g.ny < 5 || g.nz < 5) {
    throw PreconditionError("gauge grid needs at least 5 nodes per axis");
  }
  if (g.omega.size() != g.nt * g.nx * g.ny * g.nz) {
    throw PreconditionError("gauge grid value count mismatch");
  }
  if (!(g.dt > 0.0) || !(g.dx > 0.0)) throw PreconditionError("grid spacings must be positive");
  const std::size_t total = g.omega.size();
  // First derivatives of Omega at nodes one cell from every face.
  std::vector<std::array<double, 4>> grad(total, {0.0, 0.0, 0.0, 0.0});
  double scale = 0.0;
  for (std::size_t it = 1; it + 1 < g.nt; ++it)
    for (std::size_t ix = 1; ix + 1 < g.nx; ++ix)
      for (std::size_t iy = 1; iy + 1 < g.ny; ++iy)
        for (std::size_t iz = 1; iz + 1 < g.nz; ++iz) {
          auto& d = grad[g.index(it, ix, iy, iz)];
          d[0] = (g.omega[g.index(it + 1, ix, iy, iz)] - g.omega[g.index(it - 1, ix, iy, iz)]) / (2 * g.dt);
          d[1] = (g.omega[g.index(it, ix + 1, iy, iz)] - g.omega[g.index(it, ix - 1, iy, iz)]) / (2 * g.dx);
          d[2] = (g.omega[g.index(it, ix, iy + 1, iz)] - g.omega[g.index(it, ix, iy - 1, iz)]) / (2 * g.dx);
          d[3] = (g.omega[g.index(it, ix, iy, iz + 1)] - g.omega[g.index(it, ix, iy, iz - 1)]) / (2 * g.dx);
          scale = std::max({scale, std::abs(d[1]), std::abs(d[2]), std::abs(d[3])});
        }

  WeylFields out;
  out.field_scale = scale;
  auto diff = [&](std::size_t comp, int axis, std::size_t it, std::size_t ix, std::size_t iy,
                  std::size_t iz) {
    std::size_t a = 0, b = 0;
    double h = g.dx;
    switch (axis) {
      case 0: a = g.index(it + 1, ix, iy, iz); b = g.index(it - 1, ix, iy, iz); h = g.dt; break;
      case 1: a = g.index(it, ix + 1, iy, iz); b = g.index(it, ix - 1, iy, iz); break;
      case 2: a = g.index(it, ix, iy + 1, iz); b = g.index(it, ix, iy - 1, iz); break;
      default: a = g.index(it, ix, iy, iz + 1); b = g.index(it, ix, iy, iz - 1); break;
    }
    return (grad[a][comp] - grad[b][comp]) / (2.0 * h);
  };
  for (std::size_t it = 2; it + 2 < g.nt; ++it)
    for (std::size_t ix = 2; ix + 2 < g.nx; ++ix)
      for (std::size_t iy = 2; iy + 2 < g.ny; ++iy)
        for (std::size_t iz = 2; iz + 2 < g.nz; ++iz) {
          WeylSample s{it, ix, iy, iz, grad[g.index(it, ix, iy, iz)][0], {}, {}, {}};
          for (int i = 0; i < 3; ++i) {
            s.grad_phi[i] = diff(0, i + 1, it, ix, iy, iz);
            s.E[i] = -s.grad_phi[i] - diff(static_cast<std::size_t>(i + 1), 0, it, ix, iy, iz);
          }
          s.B[0] = diff(3, 2, it, ix, iy, iz) - diff(2, 3, it, ix, iy, iz);
          s.B[1] = diff(1, 3, it, ix, iy, iz) - diff(3, 1, it, ix, iy, iz);
          s.B[2] = diff(2, 1, it, ix, iy, iz) - diff(1, 2, it, ix, iy, iz);
          const auto mag = [](const Vec3& v) { return std::hypot(v[0], v[1], v[2]); };
          out.max_B = std::max(out.max_B, mag(s.B));
          out.max_E = std::max(out.max_E, mag(s.E));
          out.max_grad_phi = std::max(out.max_grad_phi, mag(s.grad_phi));
          out.samples.push_back(s);
        }
  out.doubling = out.max_grad_phi > 0.0 ? out.max_E / out.max_grad_phi : 0.0;
  return out;
}

ConfinementFit confinement_expansion(const ShellSource& s, double M,
                                     const std::vector<double>& r_samples,
                                     bool include_linear) {
  if (r_samples.size() < 4) throw PreconditionError("confinement fit needs >= 4 samples");
  if (!(M > 0.0)) throw PreconditionError("confinement mass must be positive");
  const auto& k = s.k;
  const double scale = k.hbar / (2.0 * M * k.c);
  for (double r : r_samples) {
    if (!(r >= 0.1 * scale * (1 - 1e-12) && r <= 10.0 * scale * (1 + 1e-12))) {
      throw PreconditionError("confinement samples must lie in [0.1, 10] hbar/(2Mc)");
    }
  }
  const double omega = 2.0 * M * k.c * k.c / k.hbar;
  const double beta = 1.0;
  ConfinementFit f;
  std::vector<std::vector<double>> rows;
  for (double r : r_samples) {
    // 4 T / |x - x'| and 2 (d^2T/dt^2) |x - x'| with d^2T/dt^2 = 4 omega^2 T,
    // in the natural-unit form where time and length share a unit.
    double h = -4.0 * beta * M / r;
    if (include_linear) h += 2.0 * 4.0 * omega * omega * beta * M * r;
    f.r.push_back(r);
    f.h.push_back(h);
    rows.push_back({1.0 / r, r});
  }
  const auto coef = numeric::least_squares(rows, f.h);
  f.alpha_c = coef[0];
  f.sigma_l = coef[1];
  f.ratio = f.sigma_l / std::abs(f.alpha_c);
  const double mc2_over_hbar = M * k.c * k.c / k.hbar;
  f.ratio_closed_form = 8.0 * mc2_over_hbar * mc2_over_hbar;
  return f;
}

}  // namespace qmbh::lin_gravity
