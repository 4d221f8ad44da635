#include "gausspack/evolution.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "gausspack/parallel.hpp"

namespace gausspack {

std::string_view system_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::oscillator:
      return "oscillator";
    case SystemKind::magnetic:
      return "magnetic";
    case SystemKind::free_particle:
      return "free";
  }
  return "unknown";
}

double EvolutionContext::omega_tilde() const { return std::hypot(omega, omega_L); }

void EvolutionContext::validate() const {
  if (!(M > 0) || !std::isfinite(M)) throw DomainError("mass must be positive");
  switch (kind) {
    case SystemKind::oscillator:
      if (!(omega > 0) || !std::isfinite(omega)) throw DomainError("oscillator needs omega > 0");
      break;
    case SystemKind::magnetic:
      if (!(omega >= 0) || !std::isfinite(omega) || !std::isfinite(omega_L) || omega_L == 0.0)
        throw DomainError("magnetic system needs omega >= 0 and a non-zero omega_L");
      break;
    case SystemKind::free_particle:
      break;
  }
}

EvolutionContext EvolutionContext::oscillator(double omega, double M) {
  return {SystemKind::oscillator, omega, 0.0, M};
}

EvolutionContext EvolutionContext::magnetic(double omega_L, double omega, double M) {
  return {SystemKind::magnetic, omega, omega_L, M};
}

EvolutionContext EvolutionContext::free_particle(double M) { return {SystemKind::free_particle, 0.0, 0.0, M}; }

MinPacketSpec evolve_oscillator(const MinPacketSpec& spec, double t) {
  spec.validate();
  MinPacketSpec s = spec;
  s.u = spec.u + 2 * spec.lambda * spec.omega * t;
  s.v = spec.v + spec.lambda_c * spec.omega * t;
  return s;
}

MinPacketSpec evolve_magnetic(const MinPacketSpec& spec, const EvolutionContext& ctx, double t) {
  spec.validate();
  ctx.validate();
  if (ctx.kind != SystemKind::magnetic) throw DomainError("evolve_magnetic needs a magnetic context");
  const double wt = ctx.omega_tilde();
  MinPacketSpec s = spec;
  s.omega = wt;
  s.M = ctx.M;
  s.u = spec.u + 2 * (spec.lambda * wt - ctx.omega_L) * t;
  s.v = spec.v + (spec.lambda_c * wt - ctx.omega_L) * t;
  return s;
}

double magnetic_energy(const MinPacketSpec& spec, const EvolutionContext& ctx) {
  spec.validate();
  ctx.validate();
  if (ctx.kind != SystemKind::magnetic) throw DomainError("magnetic_energy needs a magnetic context");
  return ctx.omega_tilde() * (1 + spec.L_i_abs + spec.L_c_abs) - ctx.omega_L * spec.L_total();
}

namespace {

Mat4 oscillator_flow(double omega, double M, double t) {
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  Mat4 S = Mat4::Zero();
  for (int k = 0; k < 2; ++k) {
    S(k, k) = c;
    S(k, k + 2) = s / (M * omega);
    S(k + 2, k) = -M * omega * s;
    S(k + 2, k + 2) = c;
  }
  return S;
}

// Active rotation by angle phi of both position and momentum.
Mat4 rotation4(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Mat4 R = Mat4::Zero();
  for (int k = 0; k < 4; k += 2) {
    R(k, k) = c;
    R(k, k + 1) = -s;
    R(k + 1, k) = s;
    R(k + 1, k + 1) = c;
  }
  return R;
}

using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

}  // namespace

Mat4 flow_matrix(const EvolutionContext& ctx, double t) {
  ctx.validate();
  switch (ctx.kind) {
    case SystemKind::oscillator:
      return oscillator_flow(ctx.omega, ctx.M, t);
    case SystemKind::magnetic:
      // -omega_L L_z commutes with the oscillator part and rotates by -omega_L t.
      return rotation4(-ctx.omega_L * t) * oscillator_flow(ctx.omega_tilde(), ctx.M, t);
    case SystemKind::free_particle: {
      Mat4 S = Mat4::Identity();
      S(X, PX) = S(Y, PY) = t / ctx.M;
      return S;
    }
  }
  return Mat4::Identity();
}

GaussianState evolve_state(const GaussianState& s, const EvolutionContext& ctx, double t) {
  const Mat4 S = flow_matrix(ctx, t);
  const Vec4 m = S * s.mean();
  GaussianState out;
  out.x0 = m[X];
  out.y0 = m[Y];
  out.px0 = m[PX];
  out.py0 = m[PY];
  out.cov = S * s.cov * S.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

RealParams params_from_state(const GaussianState& s, double mu) {
  if (!(mu > 0)) throw DomainError("mu must be positive");
  const Eigen::Matrix2d Crr = s.cov.block<2, 2>(0, 0);
  const Eigen::Matrix2d Crp = s.cov.block<2, 2>(0, 2);
  const Eigen::Matrix2d inv = Crr.inverse();
  // |psi|^2 ~ exp(-2 r^T Ar r) and the local momentum is -2 Ai r + Im J.
  const Eigen::Matrix2d Ar = inv / 4;
  Eigen::Matrix2d Ai = -0.5 * inv * Crp;
  Ai = 0.5 * (Ai + Ai.transpose()).eval();
  RealParams p;
  p.mu = mu;
  p.alpha = 2 * Ar(0, 0) / mu;
  p.beta = 2 * Ar(0, 1) / mu;
  p.gamma = 2 * Ar(1, 1) / mu;
  p.chi_a = Ai(0, 0) / mu;
  p.rho = 2 * Ai(0, 1) / mu;
  p.chi_c = Ai(1, 1) / mu;
  validate(p);
  return with_center(p, {s.x0, s.y0, s.px0, s.py0});
}

RealParams evolve_params(const RealParams& p, const EvolutionContext& ctx, double t) {
  return params_from_state(evolve_state(gaussian_state(p), ctx, t), p.mu);
}

FreeEvolutionRecord evolve_free(const RealParams& p0, double t, double M) {
  validate(p0);
  if (!(M > 0)) throw DomainError("mass must be positive");
  const ComplexView cv = complex_view(p0);
  const double tau = 2 * t / M;
  const cplx I(0, 1);

  Mat2c A;
  A << p0.mu * cv.a, p0.mu * cv.b / 2.0, p0.mu * cv.b / 2.0, p0.mu * cv.c;
  const Mat2c W = Mat2c::Identity() + I * tau * A;
  const cplx G = W.determinant();
  const Mat2c Winv = W.inverse();
  // A (I + i tau A)^{-1} = (A + i tau det(A)) / det(I + i tau A)
  const Mat2c At = (A + I * tau * A.determinant() * Mat2c::Identity()) / G;
  const Vec2c Jt = Winv * Vec2c(cv.F, cv.G);

  ComplexView out;
  out.mu = p0.mu;
  out.a = At(0, 0) / p0.mu;
  out.b = (At(0, 1) + At(1, 0)) / p0.mu;
  out.c = At(1, 1) / p0.mu;
  out.F = Jt[0];
  out.G = Jt[1];

  FreeEvolutionRecord rec;
  rec.t = t;
  rec.tau = tau;
  rec.F_tau = std::norm(G);
  if (!(rec.F_tau > 0)) throw std::logic_error("free evolution: F(tau) must stay positive");
  rec.params_t = from_complex(out);
  if (const auto s = symmetric_form(p0)) {
    rec.D_plus = s->D_plus();
    rec.D_minus = s->D_minus();
  } else {
    rec.D_plus = rec.D_minus = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

double SymmetricFreeForm::D_plus() const { return 0.25 * (alpha0 * alpha0 + 4 * chi0 * chi0 - beta0 * beta0); }

double SymmetricFreeForm::D_minus() const { return 0.25 * (alpha0 * alpha0 - 4 * chi0 * chi0 + beta0 * beta0); }

std::optional<SymmetricFreeForm> symmetric_form(const RealParams& p) {
  const double scale = std::max({std::abs(p.alpha), std::abs(p.chi_a), std::abs(p.chi_c), 1.0});
  const double tol = 1e-12 * scale;
  if (std::abs(p.alpha - p.gamma) > tol || std::abs(p.chi_a + p.chi_c) > tol || std::abs(p.rho) > tol)
    return std::nullopt;
  return SymmetricFreeForm{p.alpha, p.beta, p.chi_c, p.mu};
}

double free_shape_function(const SymmetricFreeForm& s, double tau) {
  const double ts = s.mu * tau;
  return 1 + 2 * ts * ts * s.D_minus() + s.D_plus() * s.D_plus() * ts * ts * ts * ts;
}

RealParams free_symmetric_closed_form(const SymmetricFreeForm& s, double tau) {
  const double ts = s.mu * tau;  // the closed forms are written for mu = 1
  const double Dp = s.D_plus(), Dm = s.D_minus();
  const double F = free_shape_function(s, tau);
  RealParams p;
  p.mu = s.mu;
  p.alpha = s.alpha0 / F * (1 + ts * ts * Dp - 2 * ts * s.chi0);
  p.gamma = s.alpha0 / F * (1 + ts * ts * Dp + 2 * ts * s.chi0);
  p.beta = s.beta0 / F * (1 - ts * ts * Dp);
  p.rho = -s.beta0 * s.alpha0 * ts / F;
  p.chi_a = (-s.chi0 * (1 - ts * ts * Dp) - Dm * ts - Dp * Dp * ts * ts * ts) / F;
  p.chi_c = (s.chi0 * (1 - ts * ts * Dp) - Dm * ts - Dp * Dp * ts * ts * ts) / F;
  return p;
}

ShrinkAnalysis shrink_analysis(const RealParams& p0) {
  validate(p0);
  const auto s = symmetric_form(p0);
  if (!s)
    throw DomainError(
        "shrink_analysis needs alpha = gamma, chi_c = -chi_a, rho = 0; use evolve_free for generic packets");
  const double a = s->alpha0, b = s->beta0, x = std::abs(s->chi0);
  ShrinkAnalysis r;
  r.D_plus = s->D_plus();
  r.D_minus = s->D_minus();
  r.shrinks = r.D_minus < 0;
  if (r.shrinks) {
    r.tau_min = std::sqrt(-r.D_minus) / r.D_plus / s->mu;
    r.F_min = 4 * a * a * (4 * x * x - b * b) / std::pow(a * a + 4 * x * x - b * b, 2);
  } else {
    r.tau_min = std::numeric_limits<double>::quiet_NaN();
    r.F_min = 1.0;
  }
  r.tau_0 = 1.0 / (std::sqrt(r.D_plus) * s->mu);
  r.F_tau0 = 4 * a * a / (a * a + 4 * x * x - b * b);
  r.eps_max = std::sqrt(4 * x / (2 * x + std::sqrt(4 * x * x + a * a - b * b)));
  return r;
}

FreeAsymptotics free_asymptotics(const RealParams& p0) {
  validate(p0);
  const auto s = symmetric_form(p0);
  if (!s)
    throw DomainError(
        "free_asymptotics needs alpha = gamma, chi_c = -chi_a, rho = 0; use evolve_free for generic packets");
  FreeAsymptotics r;
  const double b = std::abs(s->beta0);
  r.eps_infinity = std::sqrt(2 * b / (s->alpha0 + b));
  const double th0 = ellipse(p0).theta;
  r.theta_infinity = -th0;
  r.growth_rate = s->mu * std::sqrt(s->D_plus());
  return r;
}

std::vector<TrajectoryPoint> trajectory(const RealParams& p0, const EvolutionContext& ctx, double t0, double t1,
                                        int steps, int threads) {
  validate(p0);
  ctx.validate();
  if (steps < 1) throw DomainError("trajectory needs at least one step");
  const GaussianState s0 = gaussian_state(p0);
  std::vector<TrajectoryPoint> out(static_cast<std::size_t>(steps));
  parallel_for(
      out.size(),
      [&](std::size_t i) {
        const double t = steps == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / (steps - 1);
        TrajectoryPoint& pt = out[i];
        pt.t = t;
        pt.state = evolve_state(s0, ctx, t);
        const RealParams pt_params = params_from_state(pt.state, p0.mu);
        pt.split = angular_split(pt.state);
        pt.invariants = universal_invariants(pt.state.cov);
        pt.ellipse = ellipse(pt_params);
      },
      threads);
  return out;
}

}  // namespace gausspack
