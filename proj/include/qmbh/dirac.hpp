#pragma once

// Exact free Dirac evolution in 1+1 dimensions (alpha = sigma_1,
// beta = sigma_3) in momentum space: branch weights, zitterbewegung of the
// mean position, Compton-scale time averaging and the branch interference
// density. Natural units hbar = c = m = 1 unless overridden.

#include <array>
#include <complex>
#include <vector>

#include "qmbh/numeric.hpp"

namespace qmbh::dirac {

using cplx = std::complex<double>;
using Spinor = std::array<cplx, 2>;

/// Two-component amplitudes a(k_j) on a uniform momentum grid,
/// normalised so that sum_j |a(k_j)|^2 dk = 1.
struct DiracPacket1D {
  std::vector<double> k;
  double dk = 0.0;
  std::vector<Spinor> a;
  double mass = 1.0;
  double c = 1.0;
  double hbar = 1.0;

  double compton() const { return hbar / (mass * c); }
  double norm() const;
  void normalize();
};

void validate(const DiracPacket1D& p);

/// a(k) ~ seed exp(-sigma_x^2 (k - p0/hbar)^2) exp(-i k x0); |psi(x)|^2 then
/// has standard deviation sigma_x. The grid spans +-16 momentum standard
/// deviations with `points` nodes (power of two >= 256).
DiracPacket1D build_gaussian(double sigma_x, double x0, double p0, Spinor seed,
                             std::size_t points = 1024, double mass = 1.0, double c = 1.0,
                             double hbar = 1.0);

/// Eigenvectors of H(k) = c hbar k sigma_1 + m c^2 sigma_3 for +E and -E.
std::pair<Spinor, Spinor> branch_vectors(const DiracPacket1D& p, double k);

/// Projects every a(k) onto the positive-energy eigenvector and renormalises.
DiracPacket1D project_positive(const DiracPacket1D& p);

struct EnergySplit {
  double w_plus = 0.0;
  double w_minus = 0.0;
};

EnergySplit energy_fractions(const DiracPacket1D& p);

/// a(k, t) = exp(-i H(k) t / hbar) a(k), applied per momentum.
DiracPacket1D evolve(const DiracPacket1D& p, double t);

/// <x> = Re sum a^dagger i d/dk a dk, with d/dk a sixth-order centred
/// difference on the k grid (amplitudes vanish beyond the grid).
double mean_position(const DiracPacket1D& p);

/// <c sigma_1>, the velocity-operator expectation.
double mean_velocity(const DiracPacket1D& p);

struct ZbwTrace {
  std::vector<double> t;
  std::vector<double> x;
  numeric::SinusoidFit fit;
};

/// Samples <x>(t) at `samples` equally spaced times on [0, t_max] and fits
/// x0 + v t + A sin(Omega t + phi). fit.ok is false when the residual exceeds
/// 10% of the amplitude.
ZbwTrace mean_position_trace(const DiracPacket1D& p, double t_max, std::size_t samples);

/// Same sampling for <c sigma_1>(t).
ZbwTrace velocity_trace(const DiracPacket1D& p, double t_max, std::size_t samples);

/// Sliding trapezoid-weighted mean over a window of width T. Only centres whose
/// window lies inside the trace are kept; a window narrower than one sample
/// returns the trace unchanged. The result is refitted.
ZbwTrace time_average(const ZbwTrace& trace, double T);

struct InterferenceProfile {
  std::vector<double> x;
  std::vector<double> density;  ///< 2 Re(psi_+^dagger psi_-)
  double integral = 0.0;
  double max_abs = 0.0;
};

/// Branch interference density on the position grid dual to the k grid.
InterferenceProfile interference_density(const DiracPacket1D& p);

/// r = L / (m c).
double disc_radius(double angular_momentum, double mass, double c);

/// Eigenvalues of c sigma_1 by direct 2x2 diagonalization.
std::array<double, 2> velocity_eigenvalues(double c);

}  // namespace qmbh::dirac
