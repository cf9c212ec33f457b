#pragma once

// Kerr-Newman parameters in geometrized units: complex horizon roots, the
// naked-singularity predicate, leading-order far fields and the gyromagnetic
// ratio, the static limit, and the equatorial metric slice at r = a.

#include <complex>
#include <numbers>

#include "qmbh/constants.hpp"

namespace qmbh::kerr_newman {

using cplx = std::complex<double>;

/// Mass (g), charge (esu) and angular momentum (erg s). Geometrized lengths
/// are recomputed from the constants on every call.
struct KNParams {
  double mass = 0.0;
  double charge = 0.0;
  double angular_momentum = 0.0;
  constants::Constants k = constants::Constants::cgs();

  double M_star() const { return k.G * mass / (k.c * k.c); }
  double Q_star() const { return std::sqrt(k.G) * charge / (k.c * k.c); }
  double a_star() const { return angular_momentum / (mass * k.c); }

  /// Particle with spin s hbar.
  static KNParams from_particle(const constants::ParticleSpec& p,
                                const constants::Constants& k = constants::Constants::cgs());
  /// Synthetic parameters given directly as geometrized lengths (G = c = 1).
  static KNParams geometrized(double M_star, double Q_star, double a_star);
};

void validate(const KNParams& p);

struct HorizonResult {
  cplx r_plus;
  cplx r_minus;
  bool naked = false;
  /// The naked-regime rewriting r+ = M* + i b, b = (Q*^2 + a*^2 - M*^2)^(1/2);
  /// b is NaN outside the naked regime.
  double b = 0.0;
};

/// Roots of Delta = r^2 - 2 M* r + a*^2 + Q*^2 with the principal complex
/// square root.
HorizonResult horizons(const KNParams& p);

struct FarFieldSample {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;      ///< gravitational potential -G M / r
  double E_r = 0.0;
  double B_r = 0.0;
  double B_theta = 0.0;
};

/// Leading-order fields (CGS); rejects r < 100 max(a*, M*).
FarFieldSample far_fields(const KNParams& p, double r, double theta);

/// Magnetic moment read from the B_r coefficient over L Q / (2 M c).
double g_factor(const KNParams& p);

struct StaticLimit {
  cplx radius;
  bool complex_valued = false;
};

/// M* + (M*^2 - Q*^2 - a*^2 cos^2 theta)^(1/2), principal branch.
StaticLimit static_limit(const KNParams& p, double theta);

struct MetricSlice {
  double dt2 = 0.0;     ///< coefficient of dt^2 with a dphi/dt = lambda
  double dr2 = 0.0;     ///< coefficient of dr^2
  double delta = 0.0;   ///< r^2 - 2 m r + a^2 + m^2 + e^2
  double rho2 = 0.0;    ///< r^2 + a^2 cos^2 theta
  double doubling = 0.0;  ///< (1/lambda) (a dphi'/dt at light speed)
};

/// Boyer-Lindquist line element in natural units on a constant-theta slice,
/// using Delta = r^2 - 2mr + a^2 + m^2 + e^2. Throws SingularPointError where
/// Delta or rho^2 vanishes.
MetricSlice metric_slice(double a, double m, double e, double r, double theta, double lambda);

}  // namespace qmbh::kerr_newman
