#pragma once

// Physical-constants registry (CGS-Gaussian), particle catalog and the
// closed-form coupling/scale identities built on them.

#include <istream>
#include <string>
#include <vector>

#include "qmbh/ratio_check.hpp"

namespace qmbh::constants {

/// Fundamental constants. All members strictly positive.
struct Constants {
  double hbar;     ///< erg s
  double c;        ///< cm / s
  double G;        ///< cm^3 g^-1 s^-2
  double e;        ///< elementary charge, esu
  double esu_ref;  ///< reference charge e' = 1 esu

  /// CGS-Gaussian table (CODATA 2018 values).
  static constexpr Constants cgs() {
    return {1.054571817e-27, 2.99792458e10, 6.67430e-8, 4.80320471e-10, 1.0};
  }
  /// hbar = c = G = e = 1. Used for synthetic geometrized and natural-unit runs.
  static constexpr Constants unit() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }
};

/// Grams per GeV/c^2.
inline constexpr double gram_per_GeV = 1.78266192e-24;

struct ParticleSpec {
  std::string name;
  double mass = 0.0;    ///< g
  double charge = 0.0;  ///< esu, signed
  double spin = 0.0;    ///< multiple of hbar

  bool operator==(const ParticleSpec&) const = default;
};

/// Throws PreconditionError unless mass >= 0 and 2*spin is a non-negative integer.
void validate(const ParticleSpec& p);

/// Built-in catalog: electron, proton, muon, neutrino, charm. Charges follow
/// the N = +1 sign convention (electron carries +e; N = -1 is the positron).
const std::vector<ParticleSpec>& builtin_catalog();

/// Looks up a built-in particle by name; throws ConfigError if unknown.
ParticleSpec particle(const std::string& name);

/// Parses a particle table: one particle per line, `name mass_g charge_esu spin`.
/// A line holding only a name resolves against the built-in catalog.
/// Blank lines and `#` comments are ignored.
std::vector<ParticleSpec> load_catalog(std::istream& in);

/// hbar / (m c).
double compton_wavelength(const ParticleSpec& p, const Constants& k = Constants::cgs());
/// hbar / (2 m c), the ring/vortex radius for unit winding.
double half_compton_wavelength(const ParticleSpec& p,
                               const Constants& k = Constants::cgs());

/// e^2 / (m c^2).
double classical_radius(const ParticleSpec& p, const Constants& k = Constants::cgs());

/// hbar c / e^2 from the registry, the same ratio rebuilt from the two
/// lengths (hbar/mc)/(e^2/mc^2), the same rebuilt from the rounded lengths
/// 3.8e-11 cm and 2.8e-13 cm, and e*Phi/(m c^2) with Phi = e/a, a = e^2/mc^2.
std::vector<RatioCheck> coupling_identities(const ParticleSpec& p,
                                            const Constants& k = Constants::cgs());

/// e^2 / (G m^2), against 1e40 with a three-decade tolerance.
RatioCheck gravity_em_ratio(const ParticleSpec& p, const Constants& k = Constants::cgs());

/// Monopole pole strength mu = n hbar c / (2 e), n >= 1.
double monopole_strength(int n, const Constants& k = Constants::cgs());

struct ExtremeScales {
  double t;         ///< hbar / (m c^2), s
  double x;         ///< c t, cm
  double momentum;  ///< m c
  double y;         ///< momentum * c / m, must equal c^2
  double p_times_a; ///< |p| |a| with a = hbar / (m c), must equal hbar
};

ExtremeScales extreme_scales(const ParticleSpec& p, const Constants& k = Constants::cgs());

}  // namespace qmbh::constants
