#include "qmbh/constants.hpp"

#include <cmath>
#include <sstream>

#include "qmbh/error.hpp"

namespace qmbh::constants {

namespace {

constexpr Constants kCgs = Constants::cgs();

void require_mass(const ParticleSpec& p) {
  if (!(p.mass > 0.0)) throw MasslessParticleError(p.name);
}

void require_charge(const ParticleSpec& p) {
  if (p.charge == 0.0) {
    throw PreconditionError("particle '" + p.name + "' is neutral");
  }
}

}  // namespace

void validate(const ParticleSpec& p) {
  if (!(p.mass >= 0.0) || !std::isfinite(p.mass)) {
    throw PreconditionError("particle '" + p.name + "' has invalid mass");
  }
  if (!std::isfinite(p.charge)) {
    throw PreconditionError("particle '" + p.name + "' has invalid charge");
  }
  const double twice = 2.0 * p.spin;
  if (!(p.spin >= 0.0) || twice != std::round(twice)) {
    throw PreconditionError("particle '" + p.name + "' spin must be a multiple of 1/2");
  }
}

const std::vector<ParticleSpec>& builtin_catalog() {
  static const std::vector<ParticleSpec> catalog = {
      {"electron", 9.1093837015e-28, kCgs.e, 0.5},
      {"proton", 1.67262192369e-24, kCgs.e, 0.5},
      {"muon", 1.883531627e-25, kCgs.e, 0.5},
      {"neutrino", 0.0, 0.0, 0.5},
      {"charm", 1.8 * gram_per_GeV, 2.0 / 3.0 * kCgs.e, 0.5},
  };
  return catalog;
}

ParticleSpec particle(const std::string& name) {
  for (const auto& p : builtin_catalog()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown particle '" + name + "'");
}

std::vector<ParticleSpec> load_catalog(std::istream& in) {
  std::vector<ParticleSpec> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() == 1) {
      out.push_back(particle(tok[0]));
      continue;
    }
    if (tok.size() != 4) {
      throw ConfigError("particle table line " + std::to_string(lineno) +
                        ": expected `name mass_g charge_esu spin`");
    }
    ParticleSpec p;
    p.name = tok[0];
    try {
      std::size_t used = 0;
      p.mass = std::stod(tok[1], &used);
      if (used != tok[1].size()) throw std::invalid_argument(tok[1]);
      p.charge = std::stod(tok[2], &used);
      if (used != tok[2].size()) throw std::invalid_argument(tok[2]);
      p.spin = std::stod(tok[3], &used);
      if (used != tok[3].size()) throw std::invalid_argument(tok[3]);
    } catch (const std::logic_error&) {
      throw ConfigError("particle table line " + std::to_string(lineno) +
                        ": malformed number");
    }
    validate(p);
    out.push_back(p);
  }
  return out;
}

double compton_wavelength(const ParticleSpec& p, const Constants& k) {
  require_mass(p);
  return k.hbar / (p.mass * k.c);
}

double half_compton_wavelength(const ParticleSpec& p, const Constants& k) {
  require_mass(p);
  return k.hbar / (2.0 * p.mass * k.c);
}

double classical_radius(const ParticleSpec& p, const Constants& k) {
  require_mass(p);
  require_charge(p);
  return p.charge * p.charge / (p.mass * k.c * k.c);
}

std::vector<RatioCheck> coupling_identities(const ParticleSpec& p, const Constants& k) {
  require_mass(p);
  require_charge(p);
  const double e2 = p.charge * p.charge;
  const double direct = k.hbar * k.c / e2;
  const double via_lengths = compton_wavelength(p, k) / classical_radius(p, k);
  const double rounded = 3.8e-11 / 2.8e-13;

  const double a = classical_radius(p, k);
  const double phi = std::abs(p.charge) / a;
  const double e_phi_over_mc2 = std::abs(p.charge) * phi / (p.mass * k.c * k.c);

  return {
      relative_check("hbar_c_over_e2", direct, 137.04, 0.5 / 137.04,
                     "registry constants"),
      relative_check("hbar_c_over_e2_via_lengths", via_lengths, direct, 1e-12,
                     "(hbar/mc)/(e^2/mc^2), same algebra by a second route"),
      relative_check("hbar_c_over_e2_rounded_lengths", rounded, 136.0, 0.5 / 136.0,
                     "3.8e-11 cm / 2.8e-13 cm against hbar c ~ 136 e^2"),
      relative_check("e_phi_over_mc2", e_phi_over_mc2, 1.0, 1e-12,
                     "shell potential Phi = e/a at the classical radius"),
  };
}

RatioCheck gravity_em_ratio(const ParticleSpec& p, const Constants& k) {
  require_mass(p);
  require_charge(p);
  const double ratio = p.charge * p.charge / (k.G * p.mass * p.mass);
  return decades_check("e2_over_Gm2", ratio, 1e40, 3.0,
                       "order-of-magnitude comparison with 1e40");
}

double monopole_strength(int n, const Constants& k) {
  if (n < 1) throw PreconditionError("monopole winding must be >= 1");
  return 0.5 * n * k.hbar * k.c / k.e;
}

ExtremeScales extreme_scales(const ParticleSpec& p, const Constants& k) {
  require_mass(p);
  ExtremeScales s{};
  s.t = k.hbar / (p.mass * k.c * k.c);
  s.x = k.c * s.t;
  s.momentum = p.mass * k.c;
  s.y = s.momentum * k.c / p.mass;
  s.p_times_a = s.momentum * compton_wavelength(p, k);
  return s;
}

}  // namespace qmbh::constants
