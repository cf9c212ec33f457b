#include "qmbh/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fft.hpp"
#include "qmbh/error.hpp"
#include "qmbh/numeric.hpp"
#include "qmbh/table_io.hpp"

namespace qmbh::bohm {

using detail::FftPlan;
using detail::wavenumber;

WaveGrid2D::WaveGrid2D(std::size_t n_, double dx_, double mass_, double hbar_)
    : n(n_), dx(dx_), mass(mass_), hbar(hbar_), amplitudes(n_ * n_) {}

double WaveGrid2D::norm() const {
  numeric::CompensatedSum s;
  for (const auto& a : amplitudes) s.add(std::norm(a));
  return s.value() * dx * dx;
}

void WaveGrid2D::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw PreconditionError("cannot normalize an all-zero grid");
  const double f = 1.0 / std::sqrt(nrm);
  for (auto& a : amplitudes) a *= f;
}

std::pair<double, double> WaveGrid2D::centroid() const {
  numeric::CompensatedSum sx, sy, sw;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double w = std::norm(at(ix, iy));
      sx.add(w * coord(ix));
      sy.add(w * coord(iy));
      sw.add(w);
    }
  }
  return {sx.value() / sw.value(), sy.value() / sw.value()};
}

void validate(const WaveGrid2D& g) {
  if (g.n < 64 || (g.n & (g.n - 1)) != 0) {
    throw PreconditionError("grid size must be a power of two >= 64");
  }
  if (!(g.dx > 0.0) || !(g.mass > 0.0) || !(g.hbar > 0.0)) {
    throw PreconditionError("grid spacing, mass and hbar must be positive");
  }
  if (g.amplitudes.size() != g.n * g.n) {
    throw PreconditionError("amplitude count does not match grid size");
  }
}

namespace {

void require_finite(const std::vector<cplx>& a, const char* what) {
  for (const auto& z : a) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NonFiniteError(std::string(what) + " contains NaN or Inf");
    }
  }
}

void require_finite(const ScalarGrid& a, const char* what) {
  for (double x : a) {
    if (!std::isfinite(x)) throw NonFiniteError(std::string(what) + " contains NaN or Inf");
  }
}

// Fourth-order centred differences of the phase, unwrapped locally by
// chaining wrapped single-cell increments out from the node. NaN on masked
// nodes. The second-order stencil is 2% low at four cells from a vortex line.
void phase_velocity(MadelungFields& f) {
  const std::size_t n = f.n;
  const double scale = f.hbar / f.mass / (12.0 * f.dx);
  const double period = f.phase_period;
  f.vx.assign(n * n, 0.0);
  f.vy.assign(n * n, 0.0);
  auto derivative = [&](auto at) {
    const double s0 = at(0), sp1 = at(1), sp2 = at(2), sm1 = at(-1), sm2 = at(-2);
    const double u1 = numeric::wrap(sp1 - s0, period);
    const double u2 = u1 + numeric::wrap(sp2 - sp1, period);
    const double d1 = numeric::wrap(s0 - sm1, period);
    const double d2 = d1 + numeric::wrap(sm1 - sm2, period);
    return 8.0 * (u1 + d1) - (u2 + d2);
  };
  const auto idx = [n](std::size_t i, int off) {
    return (i + n + static_cast<std::size_t>(off + 2) - 2) % n;
  };
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t k = iy * n + ix;
      if (f.node_mask[k]) {
        f.vx[k] = f.vy[k] = std::nan("");
        continue;
      }
      f.vx[k] = scale * derivative([&](int o) { return f.S[iy * n + idx(ix, o)]; });
      f.vy[k] = scale * derivative([&](int o) { return f.S[idx(iy, o) * n + ix]; });
    }
  }
}

void build_mask(MadelungFields& f) {
  const double rmax = *std::max_element(f.R.begin(), f.R.end());
  if (!(rmax > 0.0)) throw PreconditionError("all-zero field has no Madelung decomposition");
  const double threshold = kNodeThreshold * rmax;
  f.node_mask.assign(f.R.size(), 0);
  for (std::size_t k = 0; k < f.R.size(); ++k) f.node_mask[k] = f.R[k] < threshold ? 1 : 0;
}

// Spectral derivative of a real field: returns d/dx (axis 0) or d/dy (axis 1),
// or the Laplacian when axis == 2.
ScalarGrid spectral(const ScalarGrid& field, std::size_t n, double dx, int axis) {
  std::vector<cplx> buf(field.begin(), field.end());
  FftPlan fwd(buf, n, true, FFTW_FORWARD);
  FftPlan bwd(buf, n, true, FFTW_BACKWARD);
  fwd.execute();
  const double norm = 1.0 / static_cast<double>(n * n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = wavenumber(iy, n, dx);
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double kx = wavenumber(ix, n, dx);
      cplx& z = buf[iy * n + ix];
      switch (axis) {
        case 0:
          z *= cplx(0.0, (ix == n / 2) ? 0.0 : kx) * norm;
          break;
        case 1:
          z *= cplx(0.0, (iy == n / 2) ? 0.0 : ky) * norm;
          break;
        default:
          z *= -(kx * kx + ky * ky) * norm;
      }
    }
  }
  bwd.execute();
  ScalarGrid out(n * n);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = buf[k].real();
  return out;
}

double l2(const ScalarGrid& a) {
  numeric::CompensatedSum s;
  for (double x : a) s.add(x * x);
  return std::sqrt(s.value());
}

}  // namespace

WaveGrid2D gaussian_packet(std::size_t n, double dx, double sigma, double x0, double y0,
                           double kx, double ky, double mass, double hbar) {
  if (!(sigma > 0.0)) throw PreconditionError("packet width must be positive");
  WaveGrid2D g(n, dx, mass, hbar);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = g.coord(ix) - x0, y = g.coord(iy) - y0;
      const double env = std::exp(-(x * x + y * y) / (4.0 * sigma * sigma));
      g.at(ix, iy) = env * std::polar(1.0, kx * g.coord(ix) + ky * g.coord(iy));
    }
  }
  validate(g);
  g.normalize();
  return g;
}

WaveGrid2D harmonic_ground_state(std::size_t n, double dx, double omega, double mass,
                                 double hbar) {
  WaveGrid2D g(n, dx, mass, hbar);
  const double a = mass * omega / (2.0 * hbar);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = g.coord(ix), y = g.coord(iy);
      g.at(ix, iy) = std::exp(-a * (x * x + y * y));
    }
  }
  validate(g);
  g.normalize();
  return g;
}

ScalarGrid harmonic_potential(std::size_t n, double dx, double omega, double mass) {
  ScalarGrid v(n * n);
  const WaveGrid2D shape(n, dx);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = shape.coord(ix), y = shape.coord(iy);
      v[iy * n + ix] = 0.5 * mass * omega * omega * (x * x + y * y);
    }
  }
  return v;
}

WaveGrid2D vortex(std::size_t n, double dx, double core_radius, int winding, double x0,
                  double y0, double mass, double hbar) {
  if (!(core_radius > 0.0)) throw PreconditionError("vortex core radius must be positive");
  WaveGrid2D g(n, dx, mass, hbar);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = g.coord(ix) - x0, y = g.coord(iy) - y0;
      const double r = std::hypot(x, y);
      g.at(ix, iy) = std::tanh(r / core_radius) * std::polar(1.0, winding * std::atan2(y, x));
    }
  }
  validate(g);
  return g;
}

double split_step_error_bound(const ScalarGrid& v, double dt, double hbar) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double phase = dt * vmax / hbar;
  return 0.5 * phase * phase;
}

WaveGrid2D evolve(const WaveGrid2D& psi, const ScalarGrid& potential, double dt,
                  std::size_t steps) {
  validate(psi);
  require_finite(psi.amplitudes, "wavefunction");
  const std::size_t n = psi.n;
  if (!potential.empty()) {
    if (potential.size() != n * n) throw PreconditionError("potential grid size mismatch");
    require_finite(potential, "potential");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("time step must be positive");
  const double bound = potential.empty() ? 0.0 : split_step_error_bound(potential, dt, psi.hbar);
  if (bound > kMaxSplitStepError) {
    std::ostringstream msg;
    msg << "time step too large: split-step error bound " << bound << " exceeds "
        << kMaxSplitStepError;
    throw PreconditionError(msg.str());
  }

  WaveGrid2D out = psi;
  auto& buf = out.amplitudes;
  FftPlan fwd(buf, n, true, FFTW_FORWARD);
  FftPlan bwd(buf, n, true, FFTW_BACKWARD);

  // Kinetic propagator with the inverse-transform normalisation folded in.
  std::vector<cplx> kinetic(n * n);
  const double inv = 1.0 / static_cast<double>(n * n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = wavenumber(iy, n, psi.dx);
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double kx = wavenumber(ix, n, psi.dx);
      const double phase = -psi.hbar * (kx * kx + ky * ky) * dt / (2.0 * psi.mass);
      kinetic[iy * n + ix] = std::polar(inv, phase);
    }
  }
  std::vector<cplx> half_v;
  if (!potential.empty()) {
    half_v.resize(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      half_v[k] = std::polar(1.0, -potential[k] * dt / (2.0 * psi.hbar));
    }
  }

  for (std::size_t s = 0; s < steps; ++s) {
    if (!half_v.empty()) {
      for (std::size_t k = 0; k < n * n; ++k) buf[k] *= half_v[k];
    }
    fwd.execute();
    for (std::size_t k = 0; k < n * n; ++k) buf[k] *= kinetic[k];
    bwd.execute();
    if (!half_v.empty()) {
      for (std::size_t k = 0; k < n * n; ++k) buf[k] *= half_v[k];
    }
  }
  return out;
}

MadelungFields decompose(const WaveGrid2D& psi) {
  validate(psi);
  require_finite(psi.amplitudes, "wavefunction");
  MadelungFields f;
  f.n = psi.n;
  f.dx = psi.dx;
  f.mass = psi.mass;
  f.hbar = psi.hbar;
  f.R.resize(psi.amplitudes.size());
  f.S.resize(psi.amplitudes.size());
  for (std::size_t k = 0; k < f.R.size(); ++k) {
    f.R[k] = std::abs(psi.amplitudes[k]);
    f.S[k] = std::arg(psi.amplitudes[k]);
  }
  build_mask(f);
  phase_velocity(f);
  return f;
}

MadelungFields fields_from_phase(std::size_t n, double dx, ScalarGrid amplitude,
                                 ScalarGrid phase, double phase_period, double mass,
                                 double hbar) {
  if (amplitude.size() != n * n || phase.size() != n * n) {
    throw PreconditionError("field size does not match grid");
  }
  if (!(phase_period > 0.0)) throw PreconditionError("phase period must be positive");
  require_finite(amplitude, "amplitude");
  require_finite(phase, "phase");
  MadelungFields f;
  f.n = n;
  f.dx = dx;
  f.mass = mass;
  f.hbar = hbar;
  f.phase_period = phase_period;
  f.R = std::move(amplitude);
  f.S = std::move(phase);
  build_mask(f);
  phase_velocity(f);
  return f;
}

WaveGrid2D reconstruct(const MadelungFields& f) {
  WaveGrid2D g(f.n, f.dx, f.mass, f.hbar);
  for (std::size_t k = 0; k < f.R.size(); ++k) g.amplitudes[k] = std::polar(f.R[k], f.S[k]);
  return g;
}

ScalarGrid quantum_potential(const MadelungFields& f) {
  const auto unmasked = std::count(f.node_mask.begin(), f.node_mask.end(), 0);
  if (unmasked == 0) throw PreconditionError("quantum potential: every node is masked");
  const ScalarGrid lap = spectral(f.R, f.n, f.dx, 2);
  ScalarGrid q(f.R.size());
  const double pref = -f.hbar * f.hbar / (2.0 * f.mass);
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = f.node_mask[k] ? std::nan("") : pref * lap[k] / f.R[k];
  }
  return q;
}

LoopPath LoopPath::rectangle(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) {
  if (x1 <= x0 || y1 <= y0) throw PreconditionError("rectangle corners must be ordered");
  LoopPath p;
  for (std::size_t x = x0; x < x1; ++x) p.nodes.emplace_back(x, y0);
  for (std::size_t y = y0; y < y1; ++y) p.nodes.emplace_back(x1, y);
  for (std::size_t x = x1; x > x0; --x) p.nodes.emplace_back(x, y1);
  for (std::size_t y = y1; y > y0; --y) p.nodes.emplace_back(x0, y);
  return p;
}

void validate(const LoopPath& loop, std::size_t n) {
  if (loop.nodes.size() < 4) throw PreconditionError("loop needs at least four nodes");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < loop.nodes.size(); ++i) {
    const auto [x, y] = loop.nodes[i];
    const auto [nx, ny] = loop.nodes[(i + 1) % loop.nodes.size()];
    if (x >= n || y >= n) throw PreconditionError("loop leaves the grid");
    if (!seen.insert(loop.nodes[i]).second) throw PreconditionError("loop is not simple");
    const auto ddx = x > nx ? x - nx : nx - x;
    const auto ddy = y > ny ? y - ny : ny - y;
    if (ddx + ddy != 1) throw PreconditionError("loop segments must join 4-neighbours");
  }
}

Circulation circulation(const MadelungFields& f, const LoopPath& loop) {
  validate(loop, f.n);
  for (const auto& [x, y] : loop.nodes) {
    if (f.masked(x, y)) {
      throw NodeCrossingError("loop crosses masked node (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
    }
  }
  numeric::CompensatedSum phase;
  for (std::size_t i = 0; i < loop.nodes.size(); ++i) {
    const auto [x, y] = loop.nodes[i];
    const auto [nx, ny] = loop.nodes[(i + 1) % loop.nodes.size()];
    phase.add(numeric::wrap(f.S[ny * f.n + nx] - f.S[y * f.n + x], f.phase_period));
  }
  Circulation c;
  c.gamma = f.hbar / f.mass * phase.value();
  c.half_quanta = phase.value() / std::numbers::pi;
  c.nearest = std::lround(c.half_quanta);
  c.residual = std::abs(c.half_quanta - static_cast<double>(c.nearest));
  return c;
}

double continuity_residual(const WaveGrid2D& before, const WaveGrid2D& after, double dt) {
  if (before.n != after.n || before.dx != after.dx) {
    throw PreconditionError("continuity: grids differ");
  }
  if (!(dt > 0.0)) throw PreconditionError("continuity: dt must be positive");
  const std::size_t n = before.n;
  const MadelungFields f0 = decompose(before);
  const MadelungFields f1 = decompose(after);
  ScalarGrid jx(n * n), jy(n * n), drho(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    const double r0 = f0.R[k] * f0.R[k], r1 = f1.R[k] * f1.R[k];
    drho[k] = (r1 - r0) / dt;
    const double a = f0.node_mask[k] ? 0.0 : r0, b = f1.node_mask[k] ? 0.0 : r1;
    jx[k] = 0.5 * ((a > 0 ? a * f0.vx[k] : 0.0) + (b > 0 ? b * f1.vx[k] : 0.0));
    jy[k] = 0.5 * ((a > 0 ? a * f0.vy[k] : 0.0) + (b > 0 ? b * f1.vy[k] : 0.0));
  }
  const ScalarGrid dxj = spectral(jx, n, before.dx, 0);
  const ScalarGrid dyj = spectral(jy, n, before.dx, 1);
  ScalarGrid div(n * n), res(n * n);
  for (std::size_t k = 0; k < n * n; ++k) {
    div[k] = dxj[k] + dyj[k];
    res[k] = drho[k] + div[k];
  }
  const double scale = std::max(l2(drho), l2(div));
  if (scale == 0.0) return 0.0;
  return l2(res) / scale;
}

Spread stationary_spread(const MadelungFields& f, const ScalarGrid& q, const ScalarGrid& v) {
  numeric::CompensatedSum s, s2;
  std::size_t count = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (f.node_mask[k]) continue;
    const double e = q[k] + (v.empty() ? 0.0 : v[k]);
    s.add(e);
    ++count;
  }
  if (count == 0) throw PreconditionError("no unmasked nodes");
  Spread out;
  out.mean = s.value() / static_cast<double>(count);
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (f.node_mask[k]) continue;
    const double d = q[k] + (v.empty() ? 0.0 : v[k]) - out.mean;
    s2.add(d * d);
  }
  out.stddev = std::sqrt(s2.value() / static_cast<double>(count));
  return out;
}

void write_snapshot(const std::filesystem::path& path, const WaveGrid2D& g) {
  validate(g);
  std::string bytes;
  bytes.reserve(16 + g.amplitudes.size() * 16);
  auto put = [&bytes](double x) {
    bytes.append(reinterpret_cast<const char*>(&x), sizeof(double));
  };
  put(static_cast<double>(g.n));
  put(g.dx);
  for (const auto& a : g.amplitudes) {
    put(a.real());
    put(a.imag());
  }
  io::write_atomic(path, bytes);

  std::ostringstream desc;
  desc << "format = complex128 interleaved (re, im), row-major, index = iy * N + ix\n"
       << "header = 16 bytes: N (float64), dx (float64)\n"
       << "N = " << g.n << "\n"
       << "dx = " << io::format_double(g.dx) << "\n"
       << "mass = " << io::format_double(g.mass) << "\n"
       << "hbar = " << io::format_double(g.hbar) << "\n";
  io::write_atomic(path.string() + ".txt", desc.str());
}

WaveGrid2D read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot " + path.string());
  double header[2];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw ConfigError("truncated snapshot header");
  const auto n = static_cast<std::size_t>(header[0]);
  if (static_cast<double>(n) != header[0]) throw ConfigError("snapshot N is not an integer");
  WaveGrid2D g(n, header[1]);
  std::vector<double> raw(2 * n * n);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(double)));
  if (!in) throw ConfigError("truncated snapshot payload");
  for (std::size_t k = 0; k < n * n; ++k) g.amplitudes[k] = {raw[2 * k], raw[2 * k + 1]};

  // mass and hbar live only in the descriptor.
  std::ifstream desc(path.string() + ".txt");
  for (std::string line; std::getline(desc, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto key = line.substr(0, eq);
    key.erase(key.find_last_not_of(' ') + 1);
    const auto val = line.substr(eq + 1);
    if (key == "mass") g.mass = std::stod(val);
    if (key == "hbar") g.hbar = std::stod(val);
  }
  return g;
}

RingModel ring_model(int winding, const constants::ParticleSpec& p,
                     const constants::Constants& k, std::size_t quadrature_points) {
  if (winding < 1) throw PreconditionError("ring winding must be >= 1");
  if (!(p.mass > 0.0)) throw MasslessParticleError(p.name);
  if (quadrature_points < 3) throw PreconditionError("ring quadrature needs >= 3 points");
  RingModel r;
  r.winding = winding;
  r.mass = p.mass;
  r.radius = winding * k.hbar / (2.0 * p.mass * k.c);
  r.energy = p.mass * k.c * k.c;

  // Periodic trapezoid rule in the arc angle; exact for the constant integrands.
  const double line_density = p.mass / (2.0 * std::numbers::pi * r.radius);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(quadrature_points);
  numeric::CompensatedSum energy, length;
  for (std::size_t i = 0; i < quadrature_points; ++i) {
    const double ds = r.radius * dtheta;
    energy.add(line_density * k.c * k.c * ds);
    length.add(ds);
  }
  r.energy_quadrature = energy.value();
  const double planck = 2.0 * std::numbers::pi * k.hbar;
  r.action_quadrature_ratio = p.mass * k.c * length.value() / (winding * planck / 2.0);
  return r;
}

}  // namespace qmbh::bohm
