#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gausspack/fock_expansion.hpp"
#include "gausspack/oracle/overlap.hpp"
#include "gausspack/oracle/quadrature.hpp"
#include "gausspack/special_functions.hpp"

using namespace gausspack;
using std::numbers::pi;

namespace {

MinPacketSpec spec(double Li, double Lc, int lambda, int lambda_c, double u, double v) {
  MinPacketSpec s;
  s.L_i_abs = Li;
  s.L_c_abs = Lc;
  s.lambda = lambda;
  s.lambda_c = lambda_c;
  s.u = u;
  s.v = v;
  return s;
}

// Integral of f over [-h, h]^2 for a batch of complex-valued functions.
std::vector<double> integrate(const std::function<void(double, double, double*)>& f, int ncomp, double h) {
  oracle::BatchIntegrand g = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    const std::size_t n = xs.size();
    std::vector<double> tmp(static_cast<std::size_t>(ncomp));
    for (std::size_t i = 0; i < n; ++i) {
      f(xs[i], ys[i], tmp.data());
      for (int k = 0; k < ncomp; ++k) out[k * n + i] = tmp[static_cast<std::size_t>(k)];
    }
  };
  return oracle::integrate_2d(g, ncomp, {-h, h, -h, h}).values;
}

}  // namespace

TEST_CASE("Laguerre-Gauss modes") {
  const LGMode g{0, 0, 1.7};
  CHECK(lg_mode_eval(g, 0.0, 0.3).real() == doctest::Approx(std::sqrt(1.7 / pi)).epsilon(1e-15));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-2.5, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    const LGMode m{trial % 6, trial % 9 - 4, 0.8};
    const double x = U(rng), y = U(rng);
    const cplx a = lg_mode_eval_xy(m, x, y), b = oracle::lg_mode_reference(m, x, y);
    CHECK(std::abs(a - b) < 1e-13);
  }
  CHECK(lg_energy({2, -3, 1.0}, 0.5) == doctest::Approx(0.5 * 8));
  CHECK_THROWS_AS(lg_mode_eval({-1, 0, 1.0}, 1.0, 0.0), DomainError);
}

TEST_CASE("mode orthonormality by quadrature") {
  const LGMode a{0, 1, 1.0}, b{1, 1, 1.0}, c{0, -1, 1.0};
  const auto v = integrate(
      [&](double x, double y, double* out) {
        const cplx pa = lg_mode_eval_xy(a, x, y), pb = lg_mode_eval_xy(b, x, y), pc = lg_mode_eval_xy(c, x, y);
        const cplx ab = std::conj(pa) * pb, ac = std::conj(pa) * pc;
        out[0] = std::norm(pa);
        out[1] = ab.real();
        out[2] = ab.imag();
        out[3] = ac.real();
        out[4] = ac.imag();
      },
      5, 10.0);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int k = 1; k < 5; ++k) CHECK(std::abs(v[static_cast<std::size_t>(k)]) < 1e-10);
}

TEST_CASE("mode energies by quadrature") {
  // <H> = int |grad psi|^2 / 2 + r^2 |psi|^2 / 2 with hbar = M = omega = 1.
  for (const LGMode m : {LGMode{0, 2, 1.0}, LGMode{1, -1, 1.0}, LGMode{2, 0, 1.0}}) {
    const double h = 1e-5;
    const auto v = integrate(
        [&](double x, double y, double* out) {
          const cplx dx = (lg_mode_eval_xy(m, x + h, y) - lg_mode_eval_xy(m, x - h, y)) / (2 * h);
          const cplx dy = (lg_mode_eval_xy(m, x, y + h) - lg_mode_eval_xy(m, x, y - h)) / (2 * h);
          out[0] = 0.5 * (std::norm(dx) + std::norm(dy)) + 0.5 * (x * x + y * y) * std::norm(lg_mode_eval_xy(m, x, y));
        },
        1, 10.0);
    CHECK(v[0] == doctest::Approx(lg_energy(m, 1.0)).epsilon(1e-8));
  }
}

TEST_CASE("coherent coefficients") {
  const FockCoefficients z = coherent_coeffs(0.0, 1, 0.3, 10);
  CHECK(std::abs(z.at(0, 0)) == 1.0);
  CHECK(z.norm() == 1.0);

  const FockCoefficients c = coherent_coeffs(1.0, -1, 0.7, 60);
  for (int k = 0; k < 20; ++k)
    CHECK(std::norm(c.at(0, -k)) == doctest::Approx(std::exp(-1.0 - special::log_factorial(k))).epsilon(1e-13));
  const FockCoefficients d = coherent_coeffs(2.3, 1, 0.0, 60);
  CHECK(d.mean_m() == doctest::Approx(2.3).epsilon(1e-12));
  CHECK(d.variance_m() == doctest::Approx(2.3).epsilon(1e-11));
}

TEST_CASE("squeezed vacuum coefficients") {
  CHECK(squeezed_coeffs(0.0, 1, 0.0, 10).norm() == 1.0);
  const double eta = 1 / std::sqrt(2.0);
  const FockCoefficients s = squeezed_coeffs(eta, 1, 0.4, 200);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.mean_m() == doctest::Approx(eta * eta / (1 - eta * eta)).epsilon(1e-10));
  for (int k = 0; k < 50; ++k) {
    const double r = std::norm(s.at(0, 2 * k + 2)) / std::norm(s.at(0, 2 * k));
    CHECK(r == doctest::Approx(eta * eta * (2 * k + 1) / (2 * k + 2)).epsilon(1e-12));
  }
  CHECK(std::abs(s.at(0, 1)) == 0.0);
}

TEST_CASE("co-rotating coefficients: limits") {
  // eta -> 0 tends to the coherent family.
  const MinPacketSpec a = spec(1e-16, 1.4, 1, 1, 0.3, 0.9);
  const FockCoefficients ca = corotating_coeffs(a, 30);
  const FockCoefficients coh = coherent_coeffs(1.4, 1, 0.9, 30);
  for (int k = 0; k <= 30; ++k) CHECK(std::abs(ca.at(0, k) - coh.at(0, k)) < 1e-6);
  // L_c -> 0 tends to the squeezed vacuum; odd k vanish.
  const MinPacketSpec b = spec(0.6, 0.0, -1, -1, 0.8, 0.0);
  const FockCoefficients cb = corotating_coeffs(b, 40);
  const FockCoefficients sq = squeezed_coeffs(b.eta(), -1, 0.8, 20);
  for (int k = 0; k <= 20; ++k) CHECK(std::abs(cb.at(0, -2 * k) - sq.at(0, -2 * k)) < 1e-12);
  for (int k = 0; k < 20; ++k) CHECK(std::abs(cb.at(0, -(2 * k + 1))) < 1e-14);
  CHECK_THROWS_AS(corotating_coeffs(spec(0.3, 0.3, 1, -1, 0, 0)), DomainError);
}

TEST_CASE("co-rotating coefficients against quadrature overlaps") {
  const MinPacketSpec s = spec(0.7, 1.6, -1, -1, 1.1, 2.3);
  const FockCoefficients c = corotating_coeffs(s, 30);
  std::vector<LGMode> modes;
  for (int k = 0; k <= 10; ++k) modes.push_back({0, -k, s.mu()});
  modes.push_back({1, -2, s.mu()});
  const auto got = oracle::overlaps(build_min_packet(s), modes);
  for (std::size_t j = 0; j < modes.size(); ++j) CHECK(std::abs(got[j] - c.at(modes[j].n_r, modes[j].m)) < 1e-7);
}

TEST_CASE("anti-rotating coefficients") {
  const MinPacketSpec s = spec(0.5, 0.9, 1, -1, 0.6, 1.7);
  const FockCoefficients c = antirotating_coeffs(s, 6, 6);
  std::vector<LGMode> modes;
  for (int n = 0; n <= 6; n += 2)
    for (int m = -6; m <= 6; m += 3) modes.push_back({n, m, s.mu()});
  modes.push_back({1, 1, s.mu()});
  modes.push_back({1, -1, s.mu()});  // odd n_r with m < 0 vanishes
  const auto got = oracle::overlaps(build_min_packet(s), modes);
  for (std::size_t j = 0; j < modes.size(); ++j) {
    CAPTURE(modes[j].n_r);
    CAPTURE(modes[j].m);
    CHECK(std::abs(got[j] - c.at(modes[j].n_r, modes[j].m)) < 1e-7);
  }
  CHECK(c.at(1, -1) == cplx{});

  // Probabilities do not depend on u and v.
  const FockCoefficients ref = antirotating_coeffs(s, 8, 8);
  for (int i = 0; i < 4; ++i) {
    MinPacketSpec t = s;
    t.u = 0.9 * i;
    t.v = 1.3 * i + 0.2;
    const FockCoefficients d = antirotating_coeffs(t, 8, 8);
    for (const auto& [key, v] : ref.entries) CHECK(std::abs(std::norm(d.at(key.first, key.second)) - std::norm(v)) < 1e-14);
  }
  CHECK_THROWS_AS(antirotating_coeffs(spec(0.3, 0.3, 1, 1, 0, 0)), DomainError);
}

TEST_CASE("anti-rotating normalization identity") {
  for (double x : {0.05, 0.2, 0.45})
    for (double y : {0.0, 0.7, 3.0}) {
      const double lhs = antirotating_normalization_series(x, y, 300, 300);
      CHECK(lhs == doctest::Approx(antirotating_normalization_closed(x, y)).epsilon(1e-8));
    }
}

TEST_CASE("adaptive expansions are normalized and carry the right L") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int lam = U(rng) < 0.5 ? 1 : -1;
    const int lamc = trial % 2 == 0 ? lam : -lam;
    const MinPacketSpec s = spec(1.5 * U(rng), 2 * U(rng), lam, lamc, 6 * U(rng), 6 * U(rng));
    const FockCoefficients f = expand(s);
    CHECK_FALSE(f.truncation_warning);
    CHECK(std::abs(f.norm() - 1) < 1e-8);
    CHECK(std::abs(f.mean_m() - s.L_total()) < 1e-8);
    CHECK(std::abs(f.mean_energy_index() - mean_energy(s)) < 1e-8);
  }
}

TEST_CASE("residual decreases monotonically with truncation") {
  const MinPacketSpec s = spec(0.9, 1.2, 1, 1, 0.5, 0.1);
  double prev = 1.0;
  for (int k = 0; k < 90; k += 5) {
    const double tail = corotating_coeffs(s, k).tail;
    CHECK(tail <= prev);
    prev = tail;
  }
  CHECK(prev < 1e-10);
  TruncationPolicy tight;
  tight.cap = 3;
  CHECK(corotating_coeffs(s, -1, tight).truncation_warning);
}

TEST_CASE("generating function") {
  const MinPacketSpec s = spec(0.8, 1.3, 1, 1, 0.4, 1.2);
  CHECK(std::abs(generating_function(s, 1.0) - 1.0) < 1e-14);
  const double eta = s.eta();
  const GeneratingDerivatives d = generating_derivatives(s);
  CHECK(d.G1 == doctest::Approx(1.3 + eta * eta / (1 - eta * eta)).epsilon(1e-13));

  const double h = 1e-5;
  const double g0 = generating_function(s, 1.0).real(), gm = generating_function(s, 1 - h).real();
  const double gmm = generating_function(s, 1 - 2 * h).real();
  // One-sided stencils, since |z| <= 1.
  CHECK((3 * g0 - 4 * gm + gmm) / (2 * h) == doctest::Approx(d.G1).epsilon(1e-8));
  const double g3 = generating_function(s, 1 - 3 * h).real();
  CHECK((2 * g0 - 5 * gm + 4 * gmm - g3) / (h * h) == doctest::Approx(d.G2).epsilon(1e-4));

  const FockCoefficients c = corotating_coeffs(s, 80);
  double direct = 0.0;
  for (int k = 0; k <= 80; ++k) direct += std::norm(c.at(0, k)) * std::pow(0.5, k);
  CHECK(generating_function(s, 0.5).real() == doctest::Approx(direct).epsilon(1e-10));
  CHECK_THROWS_AS(generating_function(s, 1.5), DomainError);
}

TEST_CASE("magnetic basis substitution") {
  // Minimal packets of the charged system use mu_tilde; the same coefficient
  // formulas apply with the LG basis built on mu_tilde.
  MinPacketSpec s = spec(0.4, 0.9, 1, 1, 0.3, 0.5);
  s.omega = std::hypot(0.7, 0.5);
  const FockCoefficients c = expand(s);
  std::vector<LGMode> modes;
  for (int k = 0; k < 5; ++k) modes.push_back({0, k, s.mu()});
  const auto got = oracle::overlaps(build_min_packet(s), modes);
  for (std::size_t j = 0; j < modes.size(); ++j) CHECK(std::abs(got[j] - c.at(0, modes[j].m)) < 1e-7);
}

TEST_CASE("large-momentum approximation is a rough overlay") {
  const MinPacketSpec s = spec(40, 6, 1, 1, 0, 0);
  const FockCoefficients c = corotating_coeffs(s);
  const int k = static_cast<int>(s.L_total());
  // Average over a window, since the exact probabilities oscillate.
  double exact = 0.0, approx = 0.0;
  for (int j = k - 10; j <= k + 10; ++j) {
    exact += std::norm(c.at(0, j));
    approx += asymptotic_pk(s, j);
  }
  CHECK(std::abs(approx - exact) / exact < 0.35);
}
