#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gausspack/fluctuations.hpp"
#include "gausspack/fock_expansion.hpp"
#include "gausspack/oracle/observable.hpp"
#include "gausspack/oracle/wigner.hpp"

using namespace gausspack;
using std::numbers::pi;

namespace {

MinPacketSpec spec(double Li, double Lc, int lambda, int lambda_c, double u = 0, double v = 0) {
  MinPacketSpec s;
  s.L_i_abs = Li;
  s.L_c_abs = Lc;
  s.lambda = lambda;
  s.lambda_c = lambda_c;
  s.u = u;
  s.v = v;
  return s;
}

// Phases with lambda (v - u/2) = w.
MinPacketSpec co_spec(double Li, double Lc, double w) { return spec(Li, Lc, 1, 1, 0.0, w); }

Mat4 random_cov(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Mat4 A;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = U(rng);
  return A * A.transpose() + 0.5 * Mat4::Identity();
}

}  // namespace

TEST_CASE("Wick fourth moments") {
  const Mat4 vac = Mat4::Identity() * 0.5;
  CHECK(wick_fourth_moment(vac, X, X, X, X) == doctest::Approx(0.75));

  std::mt19937_64 rng(1);
  const Mat4 cov = random_cov(rng);
  const GaussianState s{0, 0, 0, 0, cov};
  const double w = oracle::wigner_average(s, [](const Vec4& v) { return v(X) * v(X) * v(PY) * v(PY); });
  CHECK(wick_fourth_moment(cov, X, X, PY, PY) == doctest::Approx(w).epsilon(1e-10));

  int idx[4] = {X, Y, PX, PY};
  const double ref = wick_fourth_moment(cov, X, Y, PX, PY);
  do {
    CHECK(wick_fourth_moment(cov, idx[0], idx[1], idx[2], idx[3]) == doctest::Approx(ref).epsilon(1e-15));
  } while (std::next_permutation(idx, idx + 4));
}

TEST_CASE("quadratic variance against the Wigner oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat4 cov = random_cov(rng);
    const Vec4 mean(U(rng), U(rng), U(rng), U(rng));
    Mat4 K = random_cov(rng) - Mat4::Identity();
    K = 0.5 * (K + K.transpose()).eval();
    const GaussianState s{mean(0), mean(1), mean(2), mean(3), cov};
    CHECK(quadratic_variance(mean, cov, K) == doctest::Approx(oracle::wigner_quadratic_variance(s, K)).epsilon(1e-10));
    const double m = oracle::wigner_average(s, [&](const Vec4& v) { return 0.5 * v.dot(K * v); });
    CHECK(quadratic_mean(mean, cov, K) == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("sigma_L limiting cases") {
  CHECK(sigma_L(spec(0, 2.5, 1, 1)) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(sigma_L(spec(0.7, 0, 1, 1)) == doctest::Approx(2 * 0.7 * 1.7).epsilon(1e-12));
  const double s = sigma_L(co_spec(1.0 / 8, 1.5, 0.0));
  CHECK(s == doctest::Approx(33.0 / 32).epsilon(1e-12));
  CHECK(s < 13.0 / 8);  // sub-Poissonian
}

TEST_CASE("three routes to sigma_L agree for co-rotating packets") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const MinPacketSpec s = co_spec(2 * U(rng), 3 * U(rng), 2 * pi * U(rng));
    const double closed = sigma_L_closed(s);
    CHECK(sigma_L_wick(s) == doctest::Approx(closed).epsilon(1e-9).scale(1.0));
    CHECK(generating_derivatives(s).sigma_L() == doctest::Approx(closed).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("sigma_L agrees with the quadrature of L_z^2") {
  for (const MinPacketSpec& s : {co_spec(0.4, 1.1, 0.6), spec(0.9, 0.5, -1, 1, 1.0, 2.0)}) {
    const RealParams p = build_min_packet(s);
    const oracle::MomentOracle m(p);
    const double L = m.expectation(oracle::Observable::angular_momentum());
    const double L2 = m.expectation(oracle::Observable::angular_momentum_squared());
    CHECK(L2 - L * L == doctest::Approx(sigma_L(s)).epsilon(1e-8));
  }
}

TEST_CASE("anti-rotating sigma_L ignores the phases") {
  const double ref = sigma_L(spec(0.8, 1.7, 1, -1));
  CHECK(ref == doctest::Approx(1.7 + 2 * 0.8 * 1.8).epsilon(1e-12));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(std::abs(sigma_L(spec(0.8, 1.7, 1, -1, 0.7 * i, 0.9 * j)) - ref) < 1e-12);
}

TEST_CASE("w = 0 minimizes co-rotating sigma_L on a grid") {
  const double at0 = sigma_L(co_spec(0.5, 2.0, 0.0));
  for (int k = 1; k < 16; ++k) CHECK(sigma_L(co_spec(0.5, 2.0, pi * k / 16)) >= at0);
}

TEST_CASE("energy variance") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double Li = 2 * U(rng), Lc = 2 * U(rng), wL = 0.5 + U(rng);
    const auto mag = EvolutionContext::magnetic(wL);
    CHECK(std::abs(sigma_E(spec(Li, Lc, 1, 1, U(rng), U(rng)), mag)) < 1e-12);
    CHECK(sigma_E(spec(Li, Lc, 1, -1), mag) == doctest::Approx(4 * Lc * wL * wL).epsilon(1e-12));
    const MinPacketSpec s = spec(Li, Lc, -1, 1, 3 * U(rng), 3 * U(rng));
    CHECK(sigma_E(s, mag) == doctest::Approx(wL * wL * sigma_E_magnetic_closed(s, wL)).epsilon(1e-10));

    MinPacketSpec o = co_spec(Li, Lc, U(rng));
    o.omega = 1.7;
    CHECK(sigma_E(o, EvolutionContext::oscillator(1.7)) == doctest::Approx(1.7 * 1.7 * sigma_L(o)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sigma_E(co_spec(0.3, 0.3, 0), EvolutionContext::free_particle()), DomainError);
}

TEST_CASE("charged oscillator energy variance against the Wigner oracle") {
  const auto ctx = EvolutionContext::magnetic(0.6, 0.9, 1.3);
  MinPacketSpec s = spec(0.7, 1.2, -1, 1, 0.4, 1.9);
  s.omega = ctx.omega_tilde();
  s.M = ctx.M;
  const GaussianState st = gaussian_state(build_min_packet(s));
  const double w = oracle::wigner_quadratic_variance(st, hamiltonian_form(ctx));
  CHECK(sigma_E(s, ctx) == doctest::Approx(w).epsilon(1e-10));
}

TEST_CASE("sub-Poissonian optimum") {
  const SubPoissonOptimum a = subpoisson_optimum(1.0 / 8);
  CHECK(a.L_total == doctest::Approx(13.0 / 8).epsilon(1e-12));
  CHECK(a.sigma_min == doctest::Approx(33.0 / 32).epsilon(1e-12));
  CHECK(a.eccentricity == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  const SubPoissonOptimum b = subpoisson_optimum(1.0 / 3);
  CHECK(b.L_total == doctest::Approx(19.0 / 3).epsilon(1e-12));
  CHECK(b.sigma_min == doctest::Approx(26.0 / 9).epsilon(1e-12));
  CHECK(b.eccentricity == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(1e-12));
  const SubPoissonOptimum z = subpoisson_optimum(0);
  CHECK(z.L_total == 0.0);
  CHECK(z.sigma_min == 0.0);
  CHECK(z.eccentricity == 0.0);

  for (double L : {13.0 / 8, 19.0 / 3}) {
    const GoldenResult g = minimize_sigma_at_fixed_total(L);
    const double expect = L < 2 ? 33.0 / 32 : 26.0 / 9;
    CHECK(g.value == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("large L_i trend of the optimum") {
  for (double Li : {50.0, 100.0}) CHECK(subpoisson_optimum(Li).L_total / (16 * Li * Li * Li) == doctest::Approx(1.0).epsilon(0.05));
  const double r50 = subpoisson_optimum(50).L_total / (16 * 50.0 * 50 * 50);
  const double r100 = subpoisson_optimum(100).L_total / (16 * 100.0 * 100 * 100);
  CHECK(std::abs(r100 - 1) < std::abs(r50 - 1));
}

TEST_CASE("variance report") {
  const VarianceReport r = variance_report(co_spec(1.0 / 8, 1.5, 0), EvolutionContext::oscillator(1.0));
  CHECK(r.sigma_L == doctest::Approx(1.03125).epsilon(1e-12));
  CHECK(r.co_rotating);
  CHECK(r.L_total == doctest::Approx(1.625));
  CHECK(r.energy == doctest::Approx(2.625));
}
