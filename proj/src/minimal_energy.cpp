#include "gausspack/minimal_energy.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gausspack/oracle/minimize.hpp"

namespace gausspack {

double MinPacketSpec::eta() const { return std::sqrt(L_i_abs / (1.0 + L_i_abs)); }

double MinPacketSpec::orbit_radius() const { return std::sqrt(L_c_abs / mu()); }

double MinPacketSpec::w() const { return lambda * (v - u / 2); }

void MinPacketSpec::validate() const {
  if (!(L_i_abs >= 0) || !(L_c_abs >= 0) || !std::isfinite(L_i_abs) || !std::isfinite(L_c_abs))
    throw DomainError("angular momentum magnitudes must be finite and non-negative");
  if ((lambda != 1 && lambda != -1) || (lambda_c != 1 && lambda_c != -1))
    throw DomainError("lambda and lambda_c must be +1 or -1");
  if (!(omega > 0) || !(M > 0) || !std::isfinite(omega) || !std::isfinite(M))
    throw DomainError("omega and M must be positive");
  if (!std::isfinite(u) || !std::isfinite(v)) throw DomainError("phases must be finite");
}

RealParams build_min_packet(const MinPacketSpec& s) {
  s.validate();
  const double eta = s.eta();
  const double cu = std::cos(s.u), su = std::sin(s.u);
  RealParams p;
  p.mu = s.mu();
  p.alpha = 1 + eta * cu;
  p.gamma = 1 - eta * cu;
  p.beta = eta * su;
  p.rho = s.lambda * eta * cu;
  p.chi_a = -s.lambda * eta * su / 2;
  p.chi_c = -p.chi_a;

  const double R = s.orbit_radius();
  FirstMoments m;
  m.x0 = R * std::cos(s.v);
  m.y0 = R * std::sin(s.v);
  m.px0 = -s.lambda_c * s.M * s.omega * m.y0;
  m.py0 = s.lambda_c * s.M * s.omega * m.x0;
  return with_center(p, m);
}

double mean_energy(const MinPacketSpec& s) {
  s.validate();
  return 1.0 + s.L_i_abs + s.L_c_abs;
}

GaussianState min_packet_covariances(const MinPacketSpec& s) {
  s.validate();
  const double eta = s.eta();
  const double cu = std::cos(s.u), su = std::sin(s.u);
  const double k = 1.0 + s.L_i_abs;
  const double mw = s.M * s.omega;
  const double lam = s.lambda;

  const double xx = k / (2 * mw) * (1 - eta * cu);
  const double yy = k / (2 * mw) * (1 + eta * cu);
  const double pxpx = mw * k / 2 * (1 + eta * cu);
  const double pypy = mw * k / 2 * (1 - eta * cu);
  const double xpx = k / 2 * lam * eta * su;
  const double ypy = -xpx;
  const double xy = -k / (2 * mw) * eta * su;
  const double pxpy = mw * k / 2 * eta * su;
  // L_i cos(u) / eta rewritten as lambda eta (1 + |L_i|) cos(u), regular at eta = 0.
  const double xpy = 0.5 * (s.L_i() - lam * eta * k * cu);
  const double ypx = -0.5 * (s.L_i() + lam * eta * k * cu);

  GaussianState g;
  const double R = s.orbit_radius();
  g.x0 = R * std::cos(s.v);
  g.y0 = R * std::sin(s.v);
  g.px0 = -s.lambda_c * mw * g.y0;
  g.py0 = s.lambda_c * mw * g.x0;
  g.cov << xx, xy, xpx, xpy,
           xy, yy, ypx, ypy,
           xpx, ypx, pxpx, pxpy,
           xpy, ypy, pxpy, pypy;
  return g;
}

double intrinsic_energy(double alpha, double beta, double gamma, double chi_a, double chi_c, double rho) {
  const double D = alpha * gamma - beta * beta;
  return ((alpha + gamma) * (1 + D + rho * rho) + 4 * (gamma * chi_a * chi_a + alpha * chi_c * chi_c) -
          4 * beta * rho * (chi_a + chi_c)) /
         (4 * D);
}

double intrinsic_energy(const RealParams& p) {
  validate(p);
  return intrinsic_energy(p.alpha, p.beta, p.gamma, p.chi_a, p.chi_c, p.rho);
}

double classical_energy(const RealParams& p) {
  const FirstMoments m = first_moments(p);
  return (m.px0 * m.px0 + m.py0 * m.py0) / (2 * p.mu) + p.mu * (m.x0 * m.x0 + m.y0 * m.y0) / 2;
}

EnergySplit energy_split(double L_i, double g, double xi, double beta, double z, double rho) {
  const double eta2 = xi * xi + beta * beta;
  const double D = g * g - eta2;
  EnergySplit e;
  e.E1 = 0.5 * g * (1 + 1 / D + L_i * L_i * D / eta2);
  const double t = rho - xi * L_i * D / eta2 - 2 * z * beta / g;
  e.E2 = 0.5 * (4 * z * z / g + g * eta2 / (beta * beta * D) * t * t);
  return e;
}

double invariant_squeezing(double xx, double pp, double xp, double omega, double M) {
  const double E = (pp / (2 * M) + M * omega * omega * xx / 2) / omega;
  const double U = xx * pp - xp * xp;
  return 2 * (E - std::sqrt(std::max(E * E - U, 0.0)));
}

Squeezing squeezing(const MinPacketSpec& s) {
  const Mat4 c = covariances(build_min_packet(s));
  Squeezing out;
  out.S_x = invariant_squeezing(c(X, X), c(PX, PX), c(X, PX), s.omega, s.M);
  out.S_y = invariant_squeezing(c(Y, Y), c(PY, PY), c(Y, PY), s.omega, s.M);
  out.closed_form = 1.0 / (1.0 + s.eta());
  out.r_max = s.eta();
  return out;
}

UniversalInvariants universal_invariants(const GaussianState& state) { return universal_invariants(state.cov); }

UniversalInvariants universal_invariants(const Mat4& q) {
  const double scale = std::max(q.cwiseAbs().maxCoeff(), 1e-300);
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("covariance matrix is not symmetric");

  UniversalInvariants r;
  // Both are small differences of large products once a packet has spread, so
  // they are accumulated in extended precision.
  const Eigen::Matrix<long double, 4, 4> ql = q.cast<long double>();
  r.D0 = static_cast<double>(ql.determinant());
  r.D2 = static_cast<double>(ql(Y, PY) * ql(Y, PY) + ql(X, PX) * ql(X, PX) + 2 * ql(X, PY) * ql(Y, PX) -
                             2 * ql(X, Y) * ql(PX, PY) - ql(PX, PX) * ql(X, X) - ql(PY, PY) * ql(Y, Y));

  // Sigma = i Omega, so the eigenvalues of Sigma^-1 Q are the imaginary parts of
  // those of Omega^-1 Q = -Omega Q.
  Mat4 omega = Mat4::Zero();
  omega.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  omega.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  const Eigen::EigenSolver<Mat4> es(-omega * q, false);
  std::array<double, 4> k;
  for (int i = 0; i < 4; ++i) k[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()[i].imag());
  std::sort(k.begin(), k.end());
  r.kappa1 = 0.5 * (k[0] + k[1]);
  r.kappa2 = 0.5 * (k[2] + k[3]);

  const double d0 = r.kappa1 * r.kappa1 * r.kappa2 * r.kappa2;
  const double d2 = -(r.kappa1 * r.kappa1 + r.kappa2 * r.kappa2);
  if (std::abs(d0 - r.D0) > 1e-10 * std::max(1.0, std::abs(r.D0)) ||
      std::abs(d2 - r.D2) > 1e-10 * std::max(1.0, std::abs(r.D2)))
    throw std::logic_error("symplectic eigenvalues inconsistent with D0/D2");
  return r;
}

namespace {


bool feasible_shape(double g, double xi, double beta, double z) {
  if (!(g > 0 && g <= 10) || std::abs(z) > 10) return false;
  const double D = g * g - xi * xi - beta * beta;
  return D > 1e-12 * std::max(g * g, 1.0);
}

// (alpha, beta, gamma, chi_a, chi_c, rho)
std::vector<double> shape_from(double g, double xi, double beta, double z, double chi, double rho) {
  return {g + xi, beta, g - xi, z + chi, z - chi, rho};
}

double shape_energy(std::span<const double> s) { return intrinsic_energy(s[0], s[1], s[2], s[3], s[4], s[5]); }

oracle::Sampler shape_sampler() {
  return [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double g = 0.2 + 2.8 * U(rng);
    const double r = 0.95 * g * std::sqrt(U(rng));
    const double phi = 2 * 3.141592653589793 * U(rng);
    return std::vector<double>{g, r * std::cos(phi), r * std::sin(phi), 4 * U(rng) - 2, 4 * U(rng) - 2};
  };
}

}  // namespace

MinimumReport verify_minimum(double L_i_abs, const MinimumSearchBudget& budget) {
  if (!(L_i_abs >= 0) || !std::isfinite(L_i_abs)) throw DomainError("L_i must be finite and non-negative");
  const double Li = L_i_abs;
  MinimumReport rep;
  rep.L_i_abs = Li;
  rep.predicted = 1.0 + Li;
  rep.starts = budget.starts;

  oracle::NelderMeadOptions nm;
  nm.max_evals = budget.max_evals_per_start;
  nm.ftol = budget.ftol;

  // Pass 1: chi eliminated, search over (g, xi, beta, z, rho).
  const oracle::Eliminator chi_elim = [Li](std::span<const double> x) -> std::optional<std::vector<double>> {
    const double g = x[0], xi = x[1], beta = x[2], z = x[3], rho = x[4];
    if (!feasible_shape(g, xi, beta, z) || std::abs(rho) > 10 || std::abs(beta) < 1e-6) return std::nullopt;
    const double D = g * g - xi * xi - beta * beta;
    const double chi = (rho * xi - Li * D) / (2 * beta);
    return shape_from(g, xi, beta, z, chi, rho);
  };
  const auto pass1 = oracle::minimize_free(shape_energy, chi_elim, shape_sampler(), budget.starts, nm, budget.seed,
                                           budget.threads);

  // Pass 2: rho eliminated, search over (g, xi, beta, z, chi); covers beta -> 0.
  const oracle::Eliminator rho_elim = [Li](std::span<const double> x) -> std::optional<std::vector<double>> {
    const double g = x[0], xi = x[1], beta = x[2], z = x[3], chi = x[4];
    if (!feasible_shape(g, xi, beta, z) || std::abs(chi) > 10 || std::abs(xi) < 1e-6) return std::nullopt;
    const double D = g * g - xi * xi - beta * beta;
    const double rho = (Li * D + 2 * beta * chi) / xi;
    if (std::abs(rho) > 10) return std::nullopt;
    return shape_from(g, xi, beta, z, chi, rho);
  };
  const auto pass2 = oracle::minimize_free(shape_energy, rho_elim, shape_sampler(), budget.starts, nm,
                                           budget.seed + 1, budget.threads);

  rep.best_chi_elimination = pass1.best_value;
  rep.best_rho_elimination = pass2.best_value;
  rep.evaluations = pass1.total_evaluations + pass2.total_evaluations;
  if (pass1.best_value <= pass2.best_value) {
    rep.best = pass1.best_value;
    rep.best_point = pass1.best_x;
  } else {
    rep.best = pass2.best_value;
    const auto& x = pass2.best_x;
    const auto full = rho_elim(x);
    rep.best_point = {x[0], x[1], x[2], x[3], (*full)[5]};
  }

  for (const auto& tr : pass1.traces) {
    if (!tr.feasible) continue;
    const auto& x = tr.x;
    if (x[1] * x[1] + x[2] * x[2] == 0.0) continue;
    const EnergySplit e = energy_split(Li, x[0], x[1], x[2], x[3], x[4]);
    rep.split_residual = std::max(rep.split_residual, std::abs(e.E1 + e.E2 - tr.value));
  }

  // Classical part at |L_c| = 1 (mu = 1): put the center on the x axis, which
  // loses nothing by rotation invariance, and eliminate p_y = L_c / x.
  const oracle::Eliminator py_elim = [](std::span<const double> x) -> std::optional<std::vector<double>> {
    if (std::abs(x[0]) < 1e-6 || std::abs(x[0]) > 100 || std::abs(x[1]) > 100) return std::nullopt;
    return std::vector<double>{x[0], x[1], 1.0 / x[0]};
  };
  const oracle::Objective ec = [](std::span<const double> s) {
    return (s[1] * s[1] + s[2] * s[2]) / 2 + s[0] * s[0] / 2;
  };
  const oracle::Sampler planar = [](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    return std::vector<double>{U(rng), U(rng)};
  };
  rep.classical_best =
      oracle::minimize_free(ec, py_elim, planar, 8, nm, budget.seed + 2, budget.threads).best_value;

  rep.passed = rep.best >= rep.predicted - 1e-6 && rep.best <= rep.predicted + 1e-6 &&
               std::abs(rep.classical_best - rep.classical_predicted) <= 1e-6;
  return rep;
}

}  // namespace gausspack
