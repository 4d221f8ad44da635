#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gausspack/minimal_energy.hpp"
#include "gausspack/oracle/observable.hpp"

using namespace gausspack;
using oracle::Observable;

namespace {

MinPacketSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  MinPacketSpec s;
  s.L_i_abs = 3 * U(rng);
  s.L_c_abs = 3 * U(rng);
  s.lambda = U(rng) < 0.5 ? 1 : -1;
  s.lambda_c = U(rng) < 0.5 ? 1 : -1;
  s.u = 2 * std::numbers::pi * U(rng);
  s.v = 2 * std::numbers::pi * U(rng);
  s.omega = 0.5 + U(rng);
  s.M = 0.5 + U(rng);
  return s;
}

// <H> of the oscillator in units of hbar omega, by quadrature.
double quadrature_energy(const RealParams& p, double omega, double M) {
  const Observable H = (Observable::of(PX) * Observable::of(PX) + Observable::of(PY) * Observable::of(PY))
                           .scaled(0.5 / M) +
                       (Observable::of(X) * Observable::of(X) + Observable::of(Y) * Observable::of(Y))
                           .scaled(0.5 * M * omega * omega);
  return oracle::expectation(p, H) / omega;
}

}  // namespace

TEST_CASE("vacuum and the L_i = 1 packet") {
  const RealParams v = build_min_packet(MinPacketSpec{});
  CHECK(v.alpha == 1.0);
  CHECK(v.gamma == 1.0);
  CHECK(v.beta == 0.0);
  CHECK(v.rho == 0.0);
  CHECK(v.chi_a == 0.0);
  CHECK(v.F1 == 0.0);
  CHECK(v.G2 == 0.0);

  MinPacketSpec s;
  s.L_i_abs = 1;
  const RealParams p = build_min_packet(s);
  const double e = 1 / std::sqrt(2.0);
  CHECK(s.eta() == doctest::Approx(e).epsilon(1e-15));
  CHECK(p.alpha == doctest::Approx(1 + e).epsilon(1e-15));
  CHECK(p.gamma == doctest::Approx(1 - e).epsilon(1e-15));
  CHECK(p.rho == doctest::Approx(e).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(0.0));
  CHECK(angular_split(p).L_i == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("angular split round trip and u, v degeneracy") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const MinPacketSpec s = random_spec(rng);
    const AngularSplit a = angular_split(build_min_packet(s));
    CHECK(std::abs(a.L_i - s.L_i()) < 1e-12);
    CHECK(std::abs(a.L_c - s.L_c()) < 1e-12);
  }
  MinPacketSpec s;
  s.L_i_abs = 0.8;
  s.L_c_abs = 1.3;
  const double E0 = mean_energy(s);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      s.u = 0.8 * i;
      s.v = 0.8 * j;
      const AngularSplit a = angular_split(build_min_packet(s));
      CHECK(mean_energy(s) == E0);
      CHECK(std::abs(a.L_i - 0.8) < 1e-12);
      CHECK(std::abs(a.L_c - 1.3) < 1e-12);
    }
}

TEST_CASE("mean energy") {
  CHECK(mean_energy(MinPacketSpec{}) == 1.0);
  MinPacketSpec s;
  s.L_i_abs = 1;
  s.L_c_abs = 0.5;
  CHECK(mean_energy(s) == 2.5);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 4; ++trial) {
    const MinPacketSpec r = random_spec(rng);
    const RealParams p = build_min_packet(r);
    CHECK(quadrature_energy(p, r.omega, r.M) == doctest::Approx(mean_energy(r)).epsilon(1e-9));
    CHECK(intrinsic_energy(p) + classical_energy(p) == doctest::Approx(mean_energy(r)).epsilon(1e-13));
  }
}

TEST_CASE("closed-form covariances") {
  MinPacketSpec s;
  s.L_i_abs = 0.9;
  s.L_c_abs = 0.4;
  const Mat4 c0 = min_packet_covariances(s).cov;
  CHECK(c0(X, PX) == doctest::Approx(0.0));
  CHECK(c0(Y, PY) == doctest::Approx(0.0));
  CHECK(c0(X, Y) == doctest::Approx(0.0));
  CHECK(c0(PX, PY) == doctest::Approx(0.0));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const MinPacketSpec r = random_spec(rng);
    const GaussianState a = min_packet_covariances(r);
    const GaussianState b = gaussian_state(build_min_packet(r));
    CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, b.cov.cwiseAbs().maxCoeff()));
    CHECK((a.mean() - b.mean()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, b.mean().norm()));
    // Robertson-Schrodinger products (1/4)(1 + |L_i|).
    const double Ux = a.cov(X, X) * a.cov(PX, PX) - a.cov(X, PX) * a.cov(X, PX);
    const double Uy = a.cov(Y, Y) * a.cov(PY, PY) - a.cov(Y, PY) * a.cov(Y, PY);
    CHECK(Ux == doctest::Approx(0.25 * (1 + r.L_i_abs)).epsilon(1e-12));
    CHECK(Uy == doctest::Approx(0.25 * (1 + r.L_i_abs)).epsilon(1e-12));
  }

  // eta -> 0: the x p_y correlation vanishes like eta, with no 0/0.
  MinPacketSpec tiny;
  tiny.L_i_abs = 1e-14;
  tiny.u = 0.3;
  const Mat4 ct = min_packet_covariances(tiny).cov;
  CHECK(std::isfinite(ct(X, PY)));
  CHECK(ct(X, PY) == doctest::Approx(covariances(build_min_packet(tiny))(X, PY)).epsilon(1e-10));
  CHECK(std::abs(ct(X, PY)) < 1e-6);
  tiny.L_i_abs = 0;
  CHECK(min_packet_covariances(tiny).cov(X, PY) == 0.0);
}

TEST_CASE("squeezing") {
  CHECK(squeezing(MinPacketSpec{}).S_x == doctest::Approx(1.0));
  MinPacketSpec s;
  s.L_i_abs = 1;
  s.u = 1.1;
  const Squeezing q = squeezing(s);
  const double expect = 1 / (1 + 1 / std::sqrt(2.0));
  CHECK(q.S_x == doctest::Approx(expect).epsilon(1e-12));
  CHECK(q.S_y == doctest::Approx(expect).epsilon(1e-12));
  CHECK(q.closed_form == doctest::Approx(expect).epsilon(1e-15));
  CHECK(q.r_max == doctest::Approx(1 / std::sqrt(2.0)));
  s.L_i_abs = 1e6;
  CHECK(squeezing(s).S_x == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("universal invariants") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const UniversalInvariants u = universal_invariants(gaussian_state(build_min_packet(random_spec(rng))));
    CHECK(u.D0 == doctest::Approx(1.0 / 16).epsilon(1e-12));
    CHECK(u.D2 == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(u.kappa1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(u.kappa2 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(u.D0 + u.D2 / 4 + 1.0 / 16) < 1e-12);
  }

  // A squeezed, tilted, non-minimal pure packet.
  RealParams p;
  p.alpha = 3.0;
  p.gamma = 0.4;
  p.beta = 0.5;
  p.chi_a = 0.7;
  p.rho = -0.6;
  const UniversalInvariants u = universal_invariants(gaussian_state(p));
  CHECK(u.D0 == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(u.D0 == doctest::Approx(u.kappa1 * u.kappa1 * u.kappa2 * u.kappa2).epsilon(1e-10));
  CHECK(u.D2 == doctest::Approx(-(u.kappa1 * u.kappa1 + u.kappa2 * u.kappa2)).epsilon(1e-10));

  Mat4 bad = Mat4::Identity() * 0.5;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(universal_invariants(bad), DomainError);
}

TEST_CASE("minimal packets minimize the intrinsic energy at fixed L_i") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    MinPacketSpec s;
    s.L_i_abs = 1.5 * (U(rng) + 1);
    s.u = 0.5 + U(rng);  // keeps beta away from zero
    const RealParams m = build_min_packet(s);
    const double target = s.L_i();
    double a = m.alpha + 0.2 * U(rng), b = m.beta + 0.2 * U(rng), g = m.gamma + 0.2 * U(rng);
    const double rho = m.rho + 0.2 * U(rng), z = 0.2 * U(rng);
    const double delta = a * g - b * b;
    if (!(a > 0 && g > 0 && delta > 1e-3 && std::abs(b) > 1e-3)) continue;
    // chi_a = z + chi, chi_c = z - chi with chi fixed by the constraint.
    const double chi = (rho * (a - g) - 2 * delta * target) / (4 * b);
    const double E = intrinsic_energy(a, b, g, z + chi, z - chi, rho);
    CHECK(E >= 1 + s.L_i_abs - 1e-9);
    ++checked;
  }
}

TEST_CASE("energy split reassembles the intrinsic energy") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double L = 2 * U(rng), g = 1.5 + U(rng), xi = 0.5 * U(rng), beta = 0.4 + 0.3 * U(rng);
    const double z = U(rng), rho = U(rng);
    const EnergySplit e = energy_split(L, g, xi, beta, z, rho);
    const double a = g + xi, c = g - xi, delta = a * c - beta * beta;
    const double chi = (rho * xi - L * delta) / (2 * beta);
    CHECK(e.E1 + e.E2 == doctest::Approx(intrinsic_energy(a, beta, c, z + chi, z - chi, rho)).epsilon(1e-12));
  }
}

TEST_CASE("brute-force constrained minimum") {
  for (double L : {0.0, 1.0}) {
    MinimumSearchBudget b;
    b.starts = 20;
    const MinimumReport r = verify_minimum(L, b);
    CHECK(r.passed);
    CHECK(r.best == doctest::Approx(1 + L).epsilon(1e-6));
    CHECK(r.classical_best == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("spec validation") {
  MinPacketSpec s;
  s.L_i_abs = -1;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = MinPacketSpec{};
  s.lambda = 0;
  CHECK_THROWS_AS(build_min_packet(s), DomainError);
  s = MinPacketSpec{};
  s.omega = 0;
  CHECK_THROWS_AS(mean_energy(s), DomainError);
}
