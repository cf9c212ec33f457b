#include "qmbh/hopping.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmbh/error.hpp"
#include "qmbh/numeric.hpp"

namespace qmbh::hopping {

void validate(const ChainSpec& spec) {
  if (spec.n < 16) throw PreconditionError("chain needs at least 16 sites");
  if (!(spec.A > 0.0)) throw PreconditionError("hopping energy A must be positive");
  if (!(spec.b > 0.0)) throw PreconditionError("site spacing b must be positive");
  if (!(spec.hbar > 0.0) || !(spec.c > 0.0)) {
    throw PreconditionError("hbar and c must be positive");
  }
}

double AmplitudeVector::norm(double b) const {
  numeric::CompensatedSum s;
  for (const auto& z : c) s.add(std::norm(z));
  return s.value() * b;
}

void AmplitudeVector::normalize(double b) {
  const double nrm = norm(b);
  if (!(nrm > 0.0)) throw PreconditionError("cannot normalize zero amplitudes");
  const double f = 1.0 / std::sqrt(nrm);
  for (auto& z : c) z *= f;
}

AmplitudeVector gaussian_amplitudes(const ChainSpec& spec, double x0, double sigma) {
  validate(spec);
  if (!(sigma > 0.0)) throw PreconditionError("gaussian width must be positive");
  AmplitudeVector a;
  a.c.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double d = spec.site(i) - x0;
    a.c[i] = std::exp(-d * d / (4.0 * sigma * sigma));
  }
  a.normalize(spec.b);
  return a;
}

double NonlocalKernel::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax < radius) return 1.0;
  const double d = (ax - radius) / width;
  return std::exp(-0.5 * d * d);
}

std::pair<double, double> two_state_energies(double E, double A) { return {E - A, E + A}; }

namespace {

Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, double shift) {
  const auto n = static_cast<Eigen::Index>(spec.n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = spec.E0 + shift;
    h(i, (i + 1) % n) -= spec.A;
    h((i + 1) % n, i) -= spec.A;
  }
  return h;
}

Eigen::SparseMatrix<double> sparse_hamiltonian(const ChainSpec& spec, double diagonal) {
  const auto n = static_cast<Eigen::Index>(spec.n);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * spec.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, diagonal);
    t.emplace_back(i, (i + 1) % n, -spec.A);
    t.emplace_back((i + 1) % n, i, -spec.A);
  }
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

}  // namespace

std::vector<double> chain_spectrum(const ChainSpec& spec, double shift) {
  validate(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(spec, shift),
                                                    Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Dispersion dispersion(const ChainSpec& spec) {
  validate(spec);
  Dispersion d;
  const std::size_t n = spec.n;
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * spec.b);
  for (std::size_t i = 0; i < n; ++i) {
    const long j = static_cast<long>(i) - static_cast<long>(n / 2) + (n % 2 == 0 ? 1 : 0);
    d.k.push_back(dk * static_cast<double>(j));
  }
  std::sort(d.k.begin(), d.k.end());
  for (double k : d.k) d.energy.push_back(spec.E0 - 2.0 * spec.A * std::cos(k * spec.b));

  d.brute_eigenvalues = chain_spectrum(spec);
  d.m_prime_formula = spec.effective_mass();

  // For A > 0 the ascending spectrum is k = 0, then degenerate +-k pairs of
  // increasing |k|: eigenvalue index i belongs to shell (i + 1) / 2.
  const std::size_t min_shells = 3;
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t shell = (i + 1) / 2;
    const double k = dk * static_cast<double>(shell);
    if (k * spec.b > 0.1 + 1e-12 && shell >= min_shells) break;
    rows.push_back({1.0, k * k});
    y.push_back(d.brute_eigenvalues[i]);
  }
  d.fit_points = y.size();
  const auto coef = numeric::least_squares(rows, y);
  d.m_prime_fit = spec.hbar * spec.hbar / (2.0 * coef[1]);
  return d;
}

AmplitudeVector evolve_chain(const ChainSpec& spec, const AmplitudeVector& psi, double dt,
                             std::size_t steps) {
  validate(spec);
  if (psi.c.size() != spec.n) throw PreconditionError("amplitude count != chain length");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_hamiltonian(spec, 0.0));
  const Eigen::MatrixXd& v = es.eigenvectors();
  const auto n = static_cast<Eigen::Index>(spec.n);
  Eigen::VectorXcd phase(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phase(i) = std::polar(1.0, -es.eigenvalues()(i) * dt / spec.hbar);
  }
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = psi.c[static_cast<std::size_t>(i)];
  // Work in the eigenbasis; one basis change on each side.
  Eigen::VectorXcd y = v.transpose().cast<cplx>() * x;
  for (std::size_t s = 0; s < steps; ++s) y = y.cwiseProduct(phase);
  x = v.cast<cplx>() * y;
  AmplitudeVector out;
  out.c.assign(x.data(), x.data() + x.size());
  return out;
}

double window_overlap(const ChainSpec& spec, const NonlocalKernel& kernel,
                      const AmplitudeVector& psi) {
  numeric::CompensatedSum s;
  for (std::size_t i = 0; i < spec.n; ++i) s.add(std::norm(psi.c[i]) * kernel(spec.site(i)));
  return s.value() * spec.b;
}

std::pair<double, AmplitudeVector> ground_state(const ChainSpec& spec, double shift,
                                                const AmplitudeVector* seed) {
  validate(spec);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const double diagonal = spec.E0 + shift;
  // Gershgorin lower bound, pushed slightly below so the shifted matrix is
  // positive definite and the lowest mode dominates after few solves.
  const double sigma = diagonal - 2.0 * spec.A - 1e-6 * spec.A;
  Eigen::SparseMatrix<double> h = sparse_hamiltonian(spec, diagonal);
  Eigen::SparseMatrix<double> shifted = h;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw Error("ground_state: factorization failed");

  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = seed && seed->c.size() == spec.n ? std::abs(seed->c[static_cast<std::size_t>(i)])
                                             : 1.0;
  }
  if (x.norm() == 0.0) x.setOnes();
  x.normalize();
  double rayleigh = x.dot(h * x);
  for (int it = 0; it < 10000; ++it) {
    x = solver.solve(x);
    x.normalize();
    const double next = x.dot(h * x);
    const bool done = std::abs(next - rayleigh) <= 1e-12 * std::max(1.0, std::abs(next));
    rayleigh = next;
    if (done) break;
  }
  if (x.sum() < 0.0) x = -x;
  AmplitudeVector out;
  out.c.resize(spec.n);
  for (Eigen::Index i = 0; i < n; ++i) out.c[static_cast<std::size_t>(i)] = x(i);
  out.normalize(spec.b);
  return {rayleigh, out};
}

std::pair<EmergentMass, AmplitudeVector> self_consistent_mass(const ChainSpec& spec,
                                                              const NonlocalKernel& kernel,
                                                              const AmplitudeVector& psi0) {
  validate(spec);
  if (psi0.c.size() != spec.n) throw PreconditionError("amplitude count != chain length");
  if (std::abs(psi0.norm(spec.b) - 1.0) > 1e-8) {
    throw PreconditionError("initial amplitudes must be normalized (sum |C|^2 b = 1)");
  }
  const double half_length = 0.5 * static_cast<double>(spec.n) * spec.b;
  if (std::isfinite(kernel.radius) && kernel.radius >= half_length) {
    throw PreconditionError("kernel window must lie inside the chain");
  }

  // The linearized operator is the free chain (diagonal 2A) plus m0.
  ChainSpec free = spec;
  free.E0 = 2.0 * spec.A;

  EmergentMass em;
  em.m_prime = spec.effective_mass();
  em.hbar = spec.hbar;
  em.c = spec.c;
  AmplitudeVector psi = psi0;
  double m0 = window_overlap(spec, kernel, psi);
  em.history.push_back({0, m0, 0.0});
  for (std::size_t k = 1; k <= kMaxMassIterations; ++k) {
    psi = ground_state(free, m0, &psi).second;
    const double target = window_overlap(spec, kernel, psi);
    const double next = m0 + kMassDamping * (target - m0);
    const double delta = std::abs(next - m0);
    m0 = next;
    em.history.push_back({k, m0, delta});
    em.iterations = k;
    if (delta <= kMassTolerance * std::abs(m0)) {
      em.converged = true;
      break;
    }
  }
  em.m0 = m0;
  em.m = std::sqrt(em.m0 * em.m_prime) / spec.c;
  return {em, psi};
}

RelativityComparison emergent_hamiltonian_check(const EmergentMass& em, double p_max,
                                                std::size_t samples) {
  if (!em.converged) throw PreconditionError("emergent mass did not converge");
  if (!(p_max >= 0.0) || samples < 2) throw PreconditionError("invalid momentum range");
  RelativityComparison out;
  const double mc = em.m * em.c;
  const double mc2 = mc * em.c;
  double worst = 0.0;
  for (double p : numeric::linspace(-p_max, p_max, samples)) {
    // (m'/m) (p^2 / 2m' + m0); algebraically p^2/2m + m c^2.
    const double op = em.m_prime / em.m * (p * p / (2.0 * em.m_prime) + em.m0);
    const double rel = std::sqrt(p * p * em.c * em.c + mc2 * mc2);
    out.p.push_back(p);
    out.operator_energy.push_back(op);
    out.relativistic_energy.push_back(rel);
    worst = std::max(worst, std::abs(op - rel) / rel);
  }
  out.max_relative_deviation = worst;
  const double x = p_max / mc;
  const double op0 = em.m_prime / em.m * em.m0;
  out.checks = {
      relative_check("rest_energy", op0, mc2, 1e-12, "p = 0: operator equals m c^2"),
      at_most("taylor_remainder_bound", worst, x * x * x * x / 8.0 + 1e-12,
              "max deviation <= (p_max/mc)^4 / 8"),
      at_most("small_momentum_tolerance", worst, kSmallMomentumTolerance,
              "max deviation within the small-p tolerance"),
  };
  return out;
}

}  // namespace qmbh::hopping
