#pragma once

// Linearized-gravity quadrature over a luminal rotating shell: mass and spin
// integrals, the far potential, the trace-log ("Christoffel") potential and
// the charge estimate built on it, the gauge-gradient field doubling, and the
// near-zone Coulomb-plus-linear expansion.

#include <Eigen/Dense>
#include <array>
#include <numbers>
#include <vector>

#include "qmbh/constants.hpp"
#include "qmbh/ratio_check.hpp"

namespace qmbh::lin_gravity {

using Vec3 = std::array<double, 3>;

enum class Geometry { ring, sphere };

struct ShellElement {
  Vec3 position;    ///< cm
  Vec3 direction;   ///< unit azimuthal direction of motion
  double mass = 0;  ///< g
  double lever_arm = 0;  ///< distance from the rotation axis
};

/// Discretized source rotating rigidly about z; every element moves at c.
struct ShellSource {
  Geometry geometry = Geometry::ring;
  double radius = 0.0;
  double mass = 0.0;
  constants::Constants k = constants::Constants::cgs();
  std::vector<ShellElement> elements;

  double speed() const { return k.c; }
  /// Rigid angular velocity c / R.
  double omega() const { return k.c / radius; }

  /// Ring of `elements` equal masses. radius <= 0 selects hbar / (2 m c).
  static ShellSource ring(double mass, std::size_t elements,
                          const constants::Constants& k = constants::Constants::cgs(),
                          double radius = 0.0);
  /// Sphere with uniform surface density, roughly `elements` elements on a
  /// (theta, phi) midpoint grid. radius <= 0 selects hbar / (2 m c).
  static ShellSource sphere(double mass, std::size_t elements,
                            const constants::Constants& k = constants::Constants::cgs(),
                            double radius = 0.0);
};

void validate(const ShellSource& s);

/// Returns a copy with every element mass multiplied by f.
ShellSource scale_masses(const ShellSource& s, double f);

/// Sum of T^00 over elements (in mass units).
double mass_integral(const ShellSource& s);

/// S_z = sum of (x cross m_e v)_z.
double spin_integral(const ShellSource& s);

/// -G sum m_e / |x - x_e| at (r, theta, phi = 0); rejects r < 100 R.
double far_potential(const ShellSource& s, double r,
                     double theta = 0.5 * std::numbers::pi);

struct ChargeEstimate {
  double a0_times_r = 0.0;       ///< hbar 2c sum 2 (G m_e) c^2 omega
  double gm2c5 = 0.0;            ///< G m^2 c^5
  double ratio_to_ref = 0.0;     ///< G m^2 c^5 / (e' e)
  double implied_charge = 0.0;   ///< G m^2 c^5 / e'
  std::vector<RatioCheck> checks;
};

/// Raw-CGS charge arithmetic. The dimensional constant (L/T)^5 that would make
/// these comparisons consistent is not known, so magnitudes are compared
/// directly and the mismatch is recorded in the check notes.
ChargeEstimate charge_estimate(const ShellSource& s);

/// h_{mu nu}(t_i, r_j) on a (t, r) grid; index = it * r.size() + ir.
/// Components are in an orthonormal (t, x, y, z) frame with eta = diag(-1,1,1,1).
struct MetricField {
  std::vector<double> t;
  std::vector<double> r;
  std::vector<Eigen::Matrix4d> h;
};

struct PotentialField {
  std::vector<double> t;  ///< times where A is reported
  std::vector<double> r;  ///< radii where A is reported
  std::vector<double> A_t;  ///< hbar d/dt log sqrt|g|, index it * r.size() + ir
  std::vector<double> A_r;  ///< hbar d/dr log sqrt|g|
};

inline constexpr double kMaxPerturbation = 0.1;

/// A_mu = hbar d_mu log sqrt|det(eta + h)| by centred differences on the
/// (possibly nonuniform) grid; reported at interior radii and, when more than
/// two times are given, interior times (A_t = 0 for a single time slice).
/// Throws LinearizationDomainError if any |h_{mu nu}| >= 0.1.
PotentialField christoffel_potential(const MetricField& field, double hbar);

/// Far-zone perturbation of the shell at probe points (r, theta = pi/2,
/// phi = 0): h = 4 sum T_e(tau) / |x - x_e| with T_e = G m_e u u
/// (u^0 = 1, |u| = c), T_e(tau) = T_e(0)(1 + 2 omega tau) and the retarded
/// argument advancing as tau = (1 + c) t.
MetricField shell_far_metric(const ShellSource& s, const std::vector<double>& r,
                             const std::vector<double>& t);

/// Scalar gauge field on a uniform (t, x, y, z) grid.
struct GaugeGrid {
  std::size_t nt = 0, nx = 0, ny = 0, nz = 0;
  double dt = 1.0, dx = 1.0;
  double t0 = 0.0, x0 = 0.0, y0 = 0.0, z0 = 0.0;
  std::vector<double> omega;

  std::size_t index(std::size_t it, std::size_t ix, std::size_t iy, std::size_t iz) const {
    return ((it * nx + ix) * ny + iy) * nz + iz;
  }
  double t(std::size_t it) const { return t0 + dt * static_cast<double>(it); }
  double x(std::size_t ix) const { return x0 + dx * static_cast<double>(ix); }
  double y(std::size_t iy) const { return y0 + dx * static_cast<double>(iy); }
  double z(std::size_t iz) const { return z0 + dx * static_cast<double>(iz); }
};

struct WeylSample {
  std::size_t it, ix, iy, iz;
  double phi;
  Vec3 grad_phi;
  Vec3 E;
  Vec3 B;
};

struct WeylFields {
  std::vector<WeylSample> samples;  ///< nodes at least two cells from every face
  double max_B = 0.0;
  double max_E = 0.0;
  double max_grad_phi = 0.0;
  double field_scale = 0.0;  ///< max |grad Omega| over the grid
  double doubling = 0.0;     ///< max|E| / max|grad phi|, 0 when phi is static
};

/// A_mu = d_mu Omega, phi = dOmega/dt, E = -grad(phi) - dA/dt, B = curl A.
WeylFields weyl_em_fields(const GaugeGrid& grid);

struct ConfinementFit {
  double alpha_c = 0.0;  ///< coefficient of 1/r
  double sigma_l = 0.0;  ///< coefficient of r
  double ratio = 0.0;    ///< sigma_l / |alpha_c|
  double ratio_closed_form = 0.0;  ///< 8 (M c^2 / hbar)^2
  std::vector<double> r;
  std::vector<double> h;
};

/// Builds h(r) from the 1/|x - x'| and |x - x'| terms of the retarded-time
/// expansion with d^2T/dt^2 = 4 omega^2 T, omega = 2 M c^2 / hbar, the source
/// taken at the origin, and fits alpha/r + sigma r. Samples must lie in
/// [0.1, 10] hbar / (2 M c); at least four are required.
ConfinementFit confinement_expansion(const ShellSource& s, double M,
                                     const std::vector<double>& r_samples,
                                     bool include_linear = true);

}  // namespace qmbh::lin_gravity
