#pragma once

// Two-dimensional Schrödinger evolution on a periodic grid, the Madelung
// (amplitude/phase) decomposition, circulation around vortices and the
// thin-ring particle model.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <vector>

#include "qmbh/constants.hpp"

namespace qmbh::bohm {

using cplx = std::complex<double>;

/// Complex amplitude on an N x N periodic grid, row-major (index = iy * N + ix).
/// Node i sits at coordinate (i - N/2) * dx on each axis.
struct WaveGrid2D {
  std::size_t n = 0;
  double dx = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<cplx> amplitudes;

  WaveGrid2D() = default;
  WaveGrid2D(std::size_t n, double dx, double mass = 1.0, double hbar = 1.0);

  double coord(std::size_t i) const { return (static_cast<double>(i) - 0.5 * n) * dx; }
  cplx& at(std::size_t ix, std::size_t iy) { return amplitudes[iy * n + ix]; }
  const cplx& at(std::size_t ix, std::size_t iy) const { return amplitudes[iy * n + ix]; }

  /// Sum |psi|^2 dx^2.
  double norm() const;
  /// Rescales so that norm() == 1.
  void normalize();
  /// <x>, <y> (no wrap-around; valid for packets away from the seam).
  std::pair<double, double> centroid() const;
};

/// Throws PreconditionError unless N >= 64 is a power of two and dx > 0.
void validate(const WaveGrid2D& g);

/// Real scalar field on the same grid layout (potentials, Q, densities).
using ScalarGrid = std::vector<double>;

/// exp(i k.r) times a Gaussian with |psi|^2 standard deviation sigma per axis.
WaveGrid2D gaussian_packet(std::size_t n, double dx, double sigma, double x0 = 0.0,
                           double y0 = 0.0, double kx = 0.0, double ky = 0.0,
                           double mass = 1.0, double hbar = 1.0);

/// Ground state of V = m omega^2 r^2 / 2, energy hbar omega.
WaveGrid2D harmonic_ground_state(std::size_t n, double dx, double omega, double mass = 1.0,
                                 double hbar = 1.0);
ScalarGrid harmonic_potential(std::size_t n, double dx, double omega, double mass = 1.0);

/// tanh(r / r0) exp(i w phi) centred at (x0, y0).
WaveGrid2D vortex(std::size_t n, double dx, double core_radius, int winding = 1,
                  double x0 = 0.0, double y0 = 0.0, double mass = 1.0, double hbar = 1.0);

/// Per-step factorization error estimate of the Strang split-step scheme used
/// by evolve(): 0.5 * (dt * max|V| / hbar)^2.
double split_step_error_bound(const ScalarGrid& v, double dt, double hbar);

/// Largest error bound accepted by evolve().
inline constexpr double kMaxSplitStepError = 1e-6;

/// Strang split-step Fourier evolution (half potential, full kinetic in
/// k-space, half potential). Unitary up to rounding. An empty potential means
/// V = 0.
WaveGrid2D evolve(const WaveGrid2D& psi, const ScalarGrid& potential, double dt,
                  std::size_t steps);

/// Madelung decomposition psi = R exp(iS) with v = (hbar/m) grad S.
struct MadelungFields {
  std::size_t n = 0;
  double dx = 0.0;
  double mass = 1.0;
  double hbar = 1.0;
  /// S is defined modulo this period. 2 pi for fields derived from a
  /// single-valued psi; pi for two-sheeted phase fields.
  double phase_period = 2.0 * std::numbers::pi;
  ScalarGrid R;
  ScalarGrid S;
  ScalarGrid vx;  ///< NaN on masked nodes
  ScalarGrid vy;  ///< NaN on masked nodes
  std::vector<std::uint8_t> node_mask;  ///< 1 where R < threshold * max R

  bool masked(std::size_t ix, std::size_t iy) const { return node_mask[iy * n + ix] != 0; }
};

inline constexpr double kNodeThreshold = 1e-8;

MadelungFields decompose(const WaveGrid2D& psi);

/// Builds fields directly from amplitude and phase arrays; the velocity is
/// computed with the same wrapped centred differences as decompose().
MadelungFields fields_from_phase(std::size_t n, double dx, ScalarGrid amplitude,
                                 ScalarGrid phase, double phase_period,
                                 double mass = 1.0, double hbar = 1.0);

/// R exp(iS).
WaveGrid2D reconstruct(const MadelungFields& f);

/// Q = -(hbar^2 / 2m) lap(R) / R with a spectral Laplacian. Masked nodes
/// hold NaN.
ScalarGrid quantum_potential(const MadelungFields& f);

/// Closed path through grid nodes; consecutive nodes are 4-neighbours and
/// the last node connects back to the first.
struct LoopPath {
  std::vector<std::pair<std::size_t, std::size_t>> nodes;

  /// Counter-clockwise boundary of the axis-aligned rectangle [x0, x1] x [y0, y1].
  static LoopPath rectangle(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1);
};

/// Throws PreconditionError unless the loop is closed, simple and on-grid.
void validate(const LoopPath& loop, std::size_t n);

struct Circulation {
  double gamma = 0.0;        ///< closed line integral of v
  double half_quanta = 0.0;  ///< m gamma / (pi hbar)
  long nearest = 0;
  double residual = 0.0;     ///< |half_quanta - nearest|
};

/// Segment-wise phase-difference summation around the loop; each difference
/// is wrapped into (-period/2, period/2]. Throws NodeCrossingError if the
/// loop touches a masked node.
Circulation circulation(const MadelungFields& f, const LoopPath& loop);

/// Relative L2 residual of d(rho)/dt + div(rho v) for a pair of grids one
/// step dt apart, normalised by the larger of the two terms.
double continuity_residual(const WaveGrid2D& before, const WaveGrid2D& after, double dt);

/// Standard deviation and mean of Q + V over unmasked nodes.
struct Spread {
  double mean = 0.0;
  double stddev = 0.0;
};
Spread stationary_spread(const MadelungFields& f, const ScalarGrid& q, const ScalarGrid& v);

/// Flat binary snapshot: 16-byte header (N and dx as float64), then N*N
/// interleaved (re, im) float64 values, plus a `<path>.txt` descriptor.
void write_snapshot(const std::filesystem::path& path, const WaveGrid2D& g);
WaveGrid2D read_snapshot(const std::filesystem::path& path);

/// Thin-ring particle: radius l = n hbar / (2 m c), energy m c^2.
struct RingModel {
  int winding = 1;
  double mass = 0.0;    ///< g
  double radius = 0.0;  ///< cm
  double energy = 0.0;  ///< erg
  double energy_quadrature = 0.0;        ///< closed integral of rho c^2 ds
  double action_quadrature_ratio = 0.0;  ///< m c (closed integral of ds) / (n h / 2)
};

RingModel ring_model(int winding, const constants::ParticleSpec& p,
                     const constants::Constants& k = constants::Constants::cgs(),
                     std::size_t quadrature_points = 4096);

}  // namespace qmbh::bohm
