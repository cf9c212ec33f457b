#pragma once

// Amplitude-hopping lattice: two-state splitting, chain dispersion and
// effective mass, the nonlocal window kernel and the self-consistent
// emergent rest-mass term.

#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "qmbh/ratio_check.hpp"

namespace qmbh::hopping {

using cplx = std::complex<double>;

/// Periodic chain: H_ii = E0, H_i,i+-1 = -A.
struct ChainSpec {
  std::size_t n = 256;
  double b = 1.0;
  double E0 = 2.0;
  double A = 1.0;
  double hbar = 1.0;
  double c = 1.0;  ///< scale entering m = sqrt(m0 m') / c

  /// Site coordinate, centred on the chain.
  double site(std::size_t i) const { return (static_cast<double>(i) - 0.5 * n) * b; }
  /// hbar^2 / (2 A b^2).
  double effective_mass() const { return hbar * hbar / (2.0 * A * b * b); }
};

void validate(const ChainSpec& spec);

/// Per-site amplitudes C_i. Normalised means sum |C_i|^2 b = 1.
struct AmplitudeVector {
  std::vector<cplx> c;

  double norm(double b) const;
  void normalize(double b);
};

/// Gaussian amplitude centred at x0 with |C|^2 standard deviation sigma.
AmplitudeVector gaussian_amplitudes(const ChainSpec& spec, double x0, double sigma);

/// U(x) = 1 for |x| < R_w, half-Gaussian falloff of width w beyond.
struct NonlocalKernel {
  double radius = std::numeric_limits<double>::infinity();
  double width = 4.0;

  double operator()(double x) const;

  /// U identically 1 over any finite chain.
  static NonlocalKernel uniform() { return {}; }
  /// Window of the given radius with falloff width 4 b.
  static NonlocalKernel window(double radius, double b) { return {radius, 4.0 * b}; }
};

/// Stationary energies (E - A, E + A) of the symmetric two-state system.
std::pair<double, double> two_state_energies(double E, double A);

struct Dispersion {
  std::vector<double> k;        ///< allowed wavenumbers, ascending
  std::vector<double> energy;   ///< E0 - 2A cos(k b) at those k
  std::vector<double> brute_eigenvalues;  ///< dense diagonalization, ascending
  double m_prime_fit = 0.0;
  double m_prime_formula = 0.0;
  std::size_t fit_points = 0;
};

/// Diagonalizes the chain and fits E = E_min + hbar^2 k^2 / (2 m') to the
/// brute-force eigenvalues with |k b| <= 0.1 (at least the three lowest |k|
/// shells on short chains).
Dispersion dispersion(const ChainSpec& spec);

/// Dense spectrum of the chain Hamiltonian plus a constant diagonal shift.
std::vector<double> chain_spectrum(const ChainSpec& spec, double shift = 0.0);

/// Exact propagation of i hbar dC/dt = H C for `steps` steps of dt.
AmplitudeVector evolve_chain(const ChainSpec& spec, const AmplitudeVector& psi, double dt,
                             std::size_t steps);

struct IterationRecord {
  std::size_t iter = 0;
  double m0 = 0.0;
  double delta = 0.0;  ///< |m0_k - m0_{k-1}|
};

struct EmergentMass {
  double m0 = 0.0;
  double m_prime = 0.0;
  double m = 0.0;  ///< sqrt(m0 m') / c
  double hbar = 1.0;
  double c = 1.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> history;
};

inline constexpr double kMassTolerance = 1e-8;
inline constexpr std::size_t kMaxMassIterations = 500;
inline constexpr double kMassDamping = 0.5;

/// Window-weighted self overlap sum |C_i|^2 U(x_i) b.
double window_overlap(const ChainSpec& spec, const NonlocalKernel& kernel,
                      const AmplitudeVector& psi);

/// Ground state (lowest eigenpair) of the chain with diagonal E0 + shift, by
/// shifted inverse-power iteration. Returns the Rayleigh quotient.
std::pair<double, AmplitudeVector> ground_state(const ChainSpec& spec, double shift,
                                                const AmplitudeVector* seed = nullptr);

/// Damped fixed-point iteration of the linearized nonlocal term: m0 from the
/// window overlap of the current amplitudes, then the amplitudes from the
/// ground state of -(hbar^2/2m') lap + m0. Non-convergence is reported through
/// `converged = false` with the partial result.
std::pair<EmergentMass, AmplitudeVector> self_consistent_mass(const ChainSpec& spec,
                                                              const NonlocalKernel& kernel,
                                                              const AmplitudeVector& psi0);

struct RelativityComparison {
  std::vector<double> p;
  std::vector<double> operator_energy;      ///< p^2/2m + m c^2 from (m'/m)(p^2/2m' + m0)
  std::vector<double> relativistic_energy;  ///< sqrt(p^2 c^2 + m^2 c^4)
  double max_relative_deviation = 0.0;
  std::vector<RatioCheck> checks;
};

inline constexpr double kSmallMomentumTolerance = 1.5e-5;

/// Compares the rescaled emergent Hamiltonian against the relativistic energy
/// over |p| <= p_max. Requires a converged EmergentMass.
RelativityComparison emergent_hamiltonian_check(const EmergentMass& em, double p_max,
                                                std::size_t samples = 2001);

}  // namespace qmbh::hopping
