#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "gausspack/evolution.hpp"
#include "gausspack/fluctuations.hpp"
#include "gausspack/minimal_energy.hpp"
#include "gausspack/oracle/minimize.hpp"
#include "gausspack/oracle/observable.hpp"
#include "gausspack/oracle/overlap.hpp"
#include "gausspack/oracle/propagate.hpp"
#include "gausspack/oracle/quadrature.hpp"
#include "gausspack/oracle/wigner.hpp"

using namespace gausspack;
using namespace gausspack::oracle;
using std::numbers::pi;

namespace {

BatchIntegrand scalar(std::function<double(double, double)> f) {
  return [f](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i], ys[i]);
  };
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int order : {8, 16}) {
    const GaussRule& g = gauss_legendre(order);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(order));
    for (int k = 0; k < 2 * order; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      CHECK(s == doctest::Approx(k % 2 ? 0.0 : 2.0 / (k + 1)).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("adaptive quadrature") {
  const auto gauss = scalar([](double x, double y) { return std::exp(-x * x - 3 * y * y); });
  const QuadratureResult r = integrate_2d(gauss, 1, {-9, 9, -9, 9});
  CHECK(r.values[0] == doctest::Approx(pi / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(r.errors[0] <= 1e-11 * r.values[0] + 1e-12);

  // Tightening the tolerance moves the result by less than the looser estimate.
  const auto peaked = scalar([](double x, double y) { return std::exp(-40 * (x - 0.3) * (x - 0.3) - y * y) * (1 + x * y); });
  QuadratureSpec loose;
  loose.rel_tol = 1e-6;
  QuadratureSpec tight;
  tight.rel_tol = 5e-7;
  const QuadratureResult a = integrate_2d(peaked, 1, {-5, 5, -5, 5}, loose);
  const QuadratureResult b = integrate_2d(peaked, 1, {-5, 5, -5, 5}, tight);
  CHECK(std::abs(a.values[0] - b.values[0]) <= a.errors[0]);

  // Deterministic.
  const QuadratureResult c = integrate_2d(peaked, 1, {-5, 5, -5, 5}, loose);
  CHECK(c.values[0] == a.values[0]);
  CHECK(c.panels == a.panels);

  QuadratureSpec tiny;
  tiny.max_subdivisions = 4;
  tiny.rel_tol = 1e-14;
  CHECK_THROWS_AS(integrate_2d(peaked, 1, {-5, 5, -5, 5}, tiny), ToleranceNotMet);

  const std::vector<double> v(1 << 20, 0.1);
  CHECK(std::abs(pairwise_sum(v) - 0.1 * (1 << 20)) < 1e-9);
}

TEST_CASE("observable expectations") {
  const RealParams vac;
  CHECK(expectation(vac, Observable::identity()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(vac, Observable::of(X) * Observable::of(X)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expectation(vac, Observable::of(PY) * Observable::of(PY)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(expectation(vac, Observable::angular_momentum())) < 1e-12);
  CHECK(expectation(vac, Observable::angular_momentum_squared()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  RealParams s;
  s.alpha = s.gamma = 1.2;
  s.beta = 0.4;
  s.chi_c = 0.9;
  s.chi_a = -0.9;
  CHECK(expectation(s, Observable::angular_momentum()) ==
        doctest::Approx(2 * 0.4 * 0.9 / (1.44 - 0.16)).epsilon(1e-10));

  // [x, px] = i
  const cplx comm = MomentOracle(s).expectation_complex(Observable::product(X, PX)) -
                    MomentOracle(s).expectation_complex(Observable::product(PX, X));
  CHECK(std::abs(comm - cplx(0, 1)) < 1e-10);
  CHECK(Observable::angular_momentum_squared().degree() == 4);
}

TEST_CASE("L_z^2 by quadrature against Wick") {
  MinPacketSpec m;
  m.L_i_abs = 0.6;
  m.L_c_abs = 1.3;
  m.lambda_c = -1;
  m.u = 0.7;
  m.v = 2.2;
  const RealParams p = build_min_packet(m);
  const MomentOracle o(p);
  const double L = o.expectation(Observable::angular_momentum());
  CHECK(o.expectation(Observable::angular_momentum_squared()) - L * L == doctest::Approx(sigma_L_wick(m)).epsilon(1e-6));
}

TEST_CASE("Gauss-Hermite rules and Wigner averages") {
  const GaussHermiteRule g = gauss_hermite(10);
  for (int k = 0; k < 20; k += 2) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
    // int z^k exp(-z^2) = Gamma((k+1)/2)
    CHECK(s == doctest::Approx(std::tgamma((k + 1) / 2.0)).epsilon(1e-12));
  }
  const GaussianState vac{0, 0, 0, 0, Mat4::Identity() * 0.5};
  CHECK(wigner_average(vac, [](const Vec4& v) { return v(X) * v(X); }) == doctest::Approx(0.5));
  CHECK(wigner_average(vac, [](const Vec4& v) { return std::pow(v(X), 4); }) == doctest::Approx(0.75));
}

TEST_CASE("overlaps of the vacuum") {
  const std::vector<LGMode> modes = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}};
  const auto c = overlaps(RealParams{}, modes);
  CHECK(std::abs(c[0] - 1.0) < 1e-10);
  CHECK(std::abs(c[1]) < 1e-10);
  CHECK(std::abs(c[2]) < 1e-10);
}

TEST_CASE("Nelder-Mead on a quadratic bowl") {
  const Objective bowl = [](std::span<const double> x) {
    return (x[0] - 1) * (x[0] - 1) + 3 * (x[1] + 2) * (x[1] + 2) + 0.5 * (x[0] - 1) * (x[1] + 2);
  };
  NelderMeadOptions opt;
  opt.ftol = 1e-16;
  const NelderMeadResult r = nelder_mead(bowl, {4.0, 3.0}, opt);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-7));

  const Eliminator id = [](std::span<const double> x) { return std::optional(std::vector<double>(x.begin(), x.end())); };
  const Sampler box = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-5.0, 5.0);
    return std::vector<double>{U(rng), U(rng)};
  };
  const MultiStartResult a = minimize_free(bowl, id, box, 6, opt, 11, 1);
  const MultiStartResult b = minimize_free(bowl, id, box, 6, opt, 11, 0);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_x == b.best_x);
  CHECK(a.best_value < 1e-12);

  const Eliminator never = [](std::span<const double>) { return std::optional<std::vector<double>>(); };
  CHECK_THROWS_AS(minimize_free(bowl, never, box, 2, opt, 1, 1), AllStartsInfeasible);
}

TEST_CASE("E1 has its minimum 1 + |L| at eta^2 = |L| / (1 + |L|)") {
  for (double L : {0.0, 0.5, 2.0}) {
    // (g, eta) with xi = 0, so eta is carried by beta.
    const Objective f = [&](std::span<const double> x) {
      return x[0] > x[1] && x[1] > 0 ? energy_split(L, x[0], 0.0, x[1], 0.0, 0.0).E1 : INFINITY;
    };
    NelderMeadOptions opt;
    opt.ftol = 1e-15;
    const NelderMeadResult r = nelder_mead(f, {2.0, 0.3}, opt);
    CHECK(r.value == doctest::Approx(1 + L).epsilon(1e-9));
    if (L > 0) CHECK(r.x[1] == doctest::Approx(std::sqrt(L / (1 + L))).epsilon(1e-4));
  }
}

TEST_CASE("free propagation over a short time") {
  RealParams p;
  p.alpha = 1.4;
  p.gamma = 0.8;
  p.beta = 0.2;
  p.chi_a = 0.5;
  p.F2 = 0.3;
  // The kernel oscillates without bound as t -> 0, so compare at a small t.
  const PropagationResult r = propagate_numeric(p, EvolutionContext::free_particle(), 0.2);
  const RealParams e = evolve_free(p, 0.2).params_t;
  CHECK(r.gaussian);
  CHECK(std::abs(r.fitted.alpha - e.alpha) < 1e-6);
  CHECK(std::abs(r.fitted.chi_a - e.chi_a) < 1e-6);
  CHECK(std::abs(r.fitted.F2 - e.F2) < 1e-6);
}
