#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>

#include "qmbh/bohm.hpp"
#include "qmbh/constants.hpp"
#include "qmbh/error.hpp"

using namespace qmbh;
using namespace qmbh::bohm;
constexpr double pi = std::numbers::pi;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(validate(WaveGrid2D(32, 0.1)), PreconditionError);
  CHECK_THROWS_AS(validate(WaveGrid2D(96, 0.1)), PreconditionError);
  CHECK_NOTHROW(validate(WaveGrid2D(64, 0.1)));
}

TEST_CASE("free evolution is unitary") {
  const auto g = gaussian_packet(64, 0.5, 2.0, 0.0, 0.0, 1.0, -0.5);
  const ScalarGrid v(64 * 64, 0.0);
  const auto out = evolve(g, v, 0.05, 1000);
  CHECK(std::abs(out.norm() - g.norm()) <= 1e-10 * g.norm());
}

TEST_CASE("oscillator ground state is stationary") {
  const std::size_t n = 64;
  const double dx = 16.0 / n;
  const auto g = harmonic_ground_state(n, dx, 1.0);
  const auto v = harmonic_potential(n, dx, 1.0);
  const double dt = 1e-5;
  CHECK(split_step_error_bound(v, dt, 1.0) <= kMaxSplitStepError);
  const auto out = evolve(g, v, dt, 300);
  double worst = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    const double a = std::norm(g.amplitudes[k]), b = std::norm(out.amplitudes[k]);
    worst = std::max(worst, std::abs(a - b));
    peak = std::max(peak, a);
  }
  CHECK(worst <= 1e-6 * peak);
}

TEST_CASE("split-step bound is enforced") {
  const std::size_t n = 64;
  const auto g = harmonic_ground_state(n, 0.25, 1.0);
  const auto v = harmonic_potential(n, 0.25, 1.0);
  CHECK_THROWS_AS(evolve(g, v, 0.1, 1), PreconditionError);
}

TEST_CASE("non-finite input is rejected") {
  auto g = gaussian_packet(64, 0.5, 2.0);
  g.amplitudes[5] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  CHECK_THROWS_AS(evolve(g, ScalarGrid(64 * 64, 0.0), 0.01, 1), PreconditionError);
  CHECK_THROWS_AS(decompose(g), PreconditionError);
}

TEST_CASE("boosted packet centroid follows hbar k / m") {
  // Free Gaussian: <x>(t) = x0 + hbar k t / m exactly.
  const double k = 2.0, t = 2.0;
  const auto g = gaussian_packet(128, 0.25, 2.0, -4.0, 0.0, k, 0.0);
  const auto out = evolve(g, ScalarGrid(128 * 128, 0.0), 0.01, 200);
  const auto [x0, y0] = g.centroid();
  const auto [x1, y1] = out.centroid();
  CHECK(x1 - x0 == doctest::Approx(k * t).epsilon(0.01));
  CHECK(std::abs(y1 - y0) < 1e-6);
}

TEST_CASE("plane-wave phase gives uniform velocity") {
  // Six whole wavelengths across the periodic box.
  const double k = 2.0 * std::numbers::pi * 6.0 / 32.0;
  const auto g = gaussian_packet(64, 0.5, 3.0, 0.0, 0.0, k, 0.0);
  const auto f = decompose(g);
  const double rmax = *std::max_element(f.R.begin(), f.R.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < f.R.size(); ++i) {
    if (f.R[i] < 1e-3 * rmax) continue;
    worst = std::max({worst, std::abs(f.vx[i] - k), std::abs(f.vy[i])});
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("real positive field has zero velocity") {
  const auto f = decompose(gaussian_packet(64, 0.5, 3.0));
  for (std::size_t i = 0; i < f.R.size(); ++i) {
    if (f.node_mask[i]) continue;
    CHECK(f.vx[i] == 0.0);
    CHECK(f.vy[i] == 0.0);
  }
}

TEST_CASE("vortex velocity is azimuthal with magnitude hbar / m r") {
  const std::size_t n = 128;
  const double dx = 0.25;
  const auto g = vortex(n, dx, 1.0, 1);
  const auto f = decompose(g);
  double worst = 0.0, radial = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = g.coord(ix), y = g.coord(iy), r = std::hypot(x, y);
      if (r < 4.0 * dx || r > n * dx / 4.0) continue;
      const std::size_t k = iy * n + ix;
      const double speed = std::hypot(f.vx[k], f.vy[k]);
      worst = std::max(worst, std::abs(speed * r - 1.0));
      radial = std::max(radial, std::abs(f.vx[k] * x + f.vy[k] * y) / (speed * r));
    }
  }
  CHECK(worst <= 0.02);
  CHECK(radial <= 0.02);
}

TEST_CASE("decompose then reconstruct") {
  const auto g = gaussian_packet(64, 0.5, 2.0, 1.0, -1.0, 0.3, 1.1);
  const auto back = reconstruct(decompose(g));
  double worst = 0.0;
  for (std::size_t k = 0; k < g.amplitudes.size(); ++k) {
    worst = std::max(worst, std::abs(back.amplitudes[k] - g.amplitudes[k]));
  }
  CHECK(worst <= 1e-12);
  // Norm of R^2 matches the source.
  const auto f = decompose(g);
  double s = 0.0;
  for (double r : f.R) s += r * r * g.dx * g.dx;
  CHECK(s == doctest::Approx(g.norm()).epsilon(1e-12));
}

TEST_CASE("all-zero field is rejected") {
  CHECK_THROWS_AS(decompose(WaveGrid2D(64, 0.5)), PreconditionError);
}

TEST_CASE("quantum potential oracles") {
  SUBCASE("constant amplitude") {
    const std::size_t n = 64;
    ScalarGrid amp(n * n, 1.0), phase(n * n);
    for (std::size_t k = 0; k < n * n; ++k) phase[k] = 0.3 * static_cast<double>(k % n);
    const auto q = quantum_potential(fields_from_phase(n, 0.5, amp, phase, 2.0 * pi));
    for (double v : q) CHECK(std::abs(v) < 1e-12);
  }
  SUBCASE("Gaussian centre") {
    // R = exp(-r^2 / 4 s^2): lap R / R at 0 is -1 / s^2.
    const double s = 2.0;
    const std::size_t n = 128;
    const auto g = gaussian_packet(n, 0.25, s);
    const auto q = quantum_potential(decompose(g));
    CHECK(q[(n / 2) * n + n / 2] == doctest::Approx(1.0 / (2.0 * s * s)).epsilon(0.01));
  }
  SUBCASE("oscillator ground state has Q + V = E") {
    const std::size_t n = 128;
    const double dx = 20.0 / n;
    const auto f = decompose(harmonic_ground_state(n, dx, 1.0));
    const auto spread = stationary_spread(f, quantum_potential(f), harmonic_potential(n, dx, 1.0));
    CHECK(spread.mean == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(spread.stddev <= 1e-3);
  }
}

TEST_CASE("circulation around a vortex") {
  const std::size_t n = 128, c = n / 2;
  const auto f = decompose(vortex(n, 0.25, 1.0, 1));
  double first = 0.0;
  for (std::size_t r : {3UL, 10UL, 30UL, 60UL}) {
    const auto circ = circulation(f, LoopPath::rectangle(c - r, c - r, c + r, c + r));
    CHECK(f.mass * circ.gamma == doctest::Approx(2.0 * pi * f.hbar).epsilon(0.01));
    CHECK(circ.nearest == 2);
    CHECK(circ.residual <= 1e-3);
    if (r == 3) first = circ.half_quanta;
    CHECK(std::abs(circ.half_quanta - first) <= 1e-3);
  }
  const auto none = circulation(f, LoopPath::rectangle(c + 5, c + 5, c + 40, c + 20));
  CHECK(none.nearest == 0);
  CHECK(none.residual <= 1e-3);
  // A loop through the masked core is refused.
  CHECK_THROWS_AS(circulation(f, LoopPath::rectangle(c, c, c + 10, c + 10)), NodeCrossingError);
}

TEST_CASE("winding two doubles the circulation") {
  const std::size_t n = 128, c = n / 2;
  const auto f = decompose(vortex(n, 0.25, 2.0, 2));
  const auto circ = circulation(f, LoopPath::rectangle(c - 20, c - 20, c + 20, c + 20));
  CHECK(circ.nearest == 4);
}

TEST_CASE("two-sheeted phase gives one half quantum") {
  const std::size_t n = 64;
  ScalarGrid amp(n * n, 1.0), phase(n * n);
  WaveGrid2D grid(n, 0.5);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      phase[iy * n + ix] = 0.5 * std::atan2(grid.coord(iy), grid.coord(ix));
    }
  }
  const auto f = fields_from_phase(n, 0.5, amp, phase, pi);
  const auto circ = circulation(f, LoopPath::rectangle(20, 20, 44, 44));
  CHECK(circ.half_quanta == doctest::Approx(1.0).epsilon(1e-3));
  // With a 2 pi window the same field reads zero: the branch cut is lost.
  const auto wrong = fields_from_phase(n, 0.5, amp, phase, 2.0 * pi);
  CHECK(std::abs(circulation(wrong, LoopPath::rectangle(20, 20, 44, 44)).half_quanta) < 1e-3);
}

TEST_CASE("loop validation") {
  LoopPath open;
  open.nodes = {{1, 1}, {1, 2}, {1, 4}};
  CHECK_THROWS_AS(validate(open, 64), PreconditionError);
  CHECK_THROWS_AS(validate(LoopPath::rectangle(10, 10, 70, 20), 64), PreconditionError);
  CHECK_THROWS_AS(LoopPath::rectangle(10, 10, 5, 20), PreconditionError);
}

TEST_CASE("continuity of the evolved density") {
  const auto g = gaussian_packet(128, 0.25, 2.0, 0.0, 0.0, 1.0, 0.5);
  const ScalarGrid v(128 * 128, 0.0);
  const double dt = 1e-3;
  const auto a = evolve(g, v, dt, 100);
  const auto b = evolve(a, v, dt, 1);
  CHECK(continuity_residual(a, b, dt) <= 1e-3);
}

TEST_CASE("snapshot round trip") {
  const auto path = std::filesystem::temp_directory_path() / "qmbh_snapshot.bin";
  auto g = gaussian_packet(64, 0.5, 2.0, 0.0, 0.0, 0.4, 0.0, 2.0, 0.5);
  write_snapshot(path, g);
  const auto back = read_snapshot(path);
  CHECK(back.n == g.n);
  CHECK(back.dx == g.dx);
  CHECK(back.mass == g.mass);
  CHECK(back.hbar == g.hbar);
  CHECK(back.amplitudes == g.amplitudes);
  CHECK(std::filesystem::file_size(path) == 16 + 64 * 64 * 16);
}

TEST_CASE("ring model") {
  const auto el = constants::particle("electron");
  const auto r1 = ring_model(1, el);
  const auto r2 = ring_model(2, el);
  CHECK(r1.radius == doctest::Approx(1.9308e-11).epsilon(1e-4));
  CHECK(r2.radius == doctest::Approx(2.0 * r1.radius).epsilon(1e-15));
  CHECK(r1.energy == doctest::Approx(el.mass * 2.99792458e10 * 2.99792458e10).epsilon(1e-15));
  for (int n : {1, 2, 5}) {
    const auto r = ring_model(n, constants::particle("proton"));
    CHECK(std::abs(r.action_quadrature_ratio - 1.0) <= 1e-10);
    CHECK(r.energy_quadrature == doctest::Approx(r.energy).epsilon(1e-10));
  }
  CHECK_THROWS_AS(ring_model(0, el), PreconditionError);
  CHECK_THROWS_AS(ring_model(1, constants::particle("neutrino")), PreconditionError);
}
