#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qmbh/error.hpp"
#include "qmbh/hopping.hpp"

using namespace qmbh;
using namespace qmbh::hopping;

TEST_CASE("two-state energies") {
  auto [a, b] = two_state_energies(2.0, 1.0);
  CHECK(a == 1.0);
  CHECK(b == 3.0);
  std::tie(a, b) = two_state_energies(5.0, 0.0);
  CHECK(a == b);
  // Quadratic-formula oracle for [[E, A], [A, E]].
  const double E = 0.0, A = 1.0;
  const double disc = std::sqrt(4.0 * E * E - 4.0 * (E * E - A * A));
  std::tie(a, b) = two_state_energies(E, A);
  CHECK(a == doctest::Approx((2.0 * E - disc) / 2.0));
  CHECK(b == doctest::Approx((2.0 * E + disc) / 2.0));
}

TEST_CASE("chain validation") {
  ChainSpec s;
  s.n = 8;
  CHECK_THROWS_AS(validate(s), PreconditionError);
  s = {};
  s.A = 0.0;
  CHECK_THROWS_AS(validate(s), PreconditionError);
  s = {};
  s.b = -1.0;
  CHECK_THROWS_AS(validate(s), PreconditionError);
}

TEST_CASE("effective mass") {
  ChainSpec s;
  CHECK(dispersion(s).m_prime_formula == 0.5);
  s.b = 2.0;
  CHECK(dispersion(s).m_prime_formula == 0.125);
  ChainSpec t;
  t.n = 256;
  t.A = 0.7;
  t.b = 0.3;
  const auto d = dispersion(t);
  CHECK(d.m_prime_fit == doctest::Approx(d.m_prime_formula).epsilon(0.01));
}

TEST_CASE("dispersion shape") {
  ChainSpec s;
  s.n = 64;
  const auto d = dispersion(s);
  auto lowest = std::min_element(d.energy.begin(), d.energy.end());
  CHECK(d.k[lowest - d.energy.begin()] == 0.0);
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    CHECK(d.energy[i] == doctest::Approx(s.E0 - 2.0 * s.A * std::cos(d.k[i] * s.b)));
    for (std::size_t j = 0; j < d.k.size(); ++j) {
      if (std::abs(d.k[j] + d.k[i]) < 1e-12) CHECK(d.energy[j] == doctest::Approx(d.energy[i]));
    }
  }
}

TEST_CASE("chain evolution preserves the norm") {
  ChainSpec s;
  s.n = 128;
  auto psi = gaussian_amplitudes(s, 0.0, 6.0);
  const auto out = evolve_chain(s, psi, 0.05, 1000);
  CHECK(std::abs(out.norm(s.b) - 1.0) <= 1e-10);
}

// Window weight computed here rather than through the library kernel.
double window_weight(double x, double radius, double width) {
  const double d = std::abs(x) - radius;
  return d <= 0.0 ? 1.0 : std::exp(-0.5 * (d / width) * (d / width));
}

TEST_CASE("uniform kernel gives unit mass in one step") {
  ChainSpec s;
  const auto psi0 = gaussian_amplitudes(s, 3.0, 8.0);
  const auto [em, psi] = self_consistent_mass(s, NonlocalKernel::uniform(), psi0);
  CHECK(em.m0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(em.iterations == 1);
  CHECK(em.converged);
  // Constant potential shifts the free spectrum by exactly m0.
  ChainSpec free = s;
  free.E0 = 2.0 * s.A;
  const auto base = chain_spectrum(free, 0.0);
  const auto shifted = chain_spectrum(free, em.m0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(shifted[i] - base[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("windowed kernel converges to the uniform-state overlap") {
  ChainSpec s;
  s.n = 256;
  const double radius = 0.25 * s.n * s.b;
  const auto kernel = NonlocalKernel::window(radius, s.b);
  const auto psi0 = gaussian_amplitudes(s, 0.0, 8.0);
  const auto [em, psi] = self_consistent_mass(s, kernel, psi0);
  REQUIRE(em.converged);
  CHECK(em.m0 > 0.0);
  CHECK(em.m0 < 1.0);

  // Brute-force scan: with a constant shift the ground state is the uniform
  // vector, so the update map is constant and its fixed point is the mean
  // window weight over the sites.
  double mean = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) mean += window_weight(s.site(i), radius, 4.0 * s.b);
  mean /= static_cast<double>(s.n);
  int crossings = 0;
  double fixed = 0.0;
  for (int j = 0; j < 1000; ++j) {
    const double a = j / 1000.0, b = (j + 1) / 1000.0;
    if ((mean - a) * (mean - b) <= 0.0) {
      ++crossings;
      fixed = 0.5 * (a + b);
    }
  }
  CHECK(crossings == 1);
  CHECK(em.m0 == doctest::Approx(fixed).epsilon(1e-3));
  CHECK(em.m0 == doctest::Approx(mean).epsilon(1e-7));

  // Monotone iterates and the k = 0 eigenvalue.
  for (std::size_t i = 2; i < em.history.size(); ++i) {
    const double a = em.history[i - 1].m0 - em.history[i - 2].m0;
    const double b = em.history[i].m0 - em.history[i - 1].m0;
    CHECK(a * b >= 0.0);
  }
  ChainSpec free = s;
  free.E0 = 2.0 * s.A;
  CHECK(chain_spectrum(free, em.m0)[0] == doctest::Approx(em.m0).epsilon(1e-8));
  CHECK(em.m == doctest::Approx(std::sqrt(em.m0 * em.m_prime)));
}

TEST_CASE("global phase does not change the mass") {
  ChainSpec s;
  const auto kernel = NonlocalKernel::window(0.25 * s.n * s.b, s.b);
  auto psi0 = gaussian_amplitudes(s, 0.0, 8.0);
  const double a = window_overlap(s, kernel, psi0);
  for (auto& c : psi0.c) c *= std::polar(1.0, 1.234);
  CHECK(window_overlap(s, kernel, psi0) == doctest::Approx(a).epsilon(1e-14));
}

TEST_CASE("self-consistent mass preconditions") {
  ChainSpec s;
  auto psi0 = gaussian_amplitudes(s, 0.0, 8.0);
  for (auto& c : psi0.c) c *= 2.0;
  CHECK_THROWS_AS(self_consistent_mass(s, NonlocalKernel::uniform(), psi0), PreconditionError);
  psi0.normalize(s.b);
  CHECK_THROWS_AS(self_consistent_mass(s, NonlocalKernel::window(1e4, s.b), psi0),
                  PreconditionError);
}

TEST_CASE("emergent Hamiltonian against relativistic energy") {
  ChainSpec s;
  const auto em = self_consistent_mass(s, NonlocalKernel::uniform(),
                                       gaussian_amplitudes(s, 0.0, 8.0)).first;
  const double mc = em.m * em.c;
  const auto small = emergent_hamiltonian_check(em, 0.1 * mc);
  CHECK(small.max_relative_deviation <= 1.5e-5);
  CHECK(all_pass(small.checks));
  const auto mid = small.p.size() / 2;
  CHECK(small.p[mid] == 0.0);
  CHECK(small.operator_energy[mid] == doctest::Approx(small.relativistic_energy[mid]).epsilon(1e-15));

  const auto wide = emergent_hamiltonian_check(em, mc);
  // 1.5 against sqrt(2) in units of m c^2.
  CHECK(wide.max_relative_deviation ==
        doctest::Approx((1.5 - std::sqrt(2.0)) / std::sqrt(2.0)).epsilon(1e-9));
  CHECK_FALSE(wide.checks[2].pass);
  CHECK(wide.checks[1].pass);

  EmergentMass pending = em;
  pending.converged = false;
  CHECK_THROWS_AS(emergent_hamiltonian_check(pending, 0.1), PreconditionError);
}
