#include "gausspack/fluctuations.hpp"

#include <cmath>
#include <stdexcept>

#include "gausspack/evolution.hpp"

namespace gausspack {

double wick_fourth_moment(const Mat4& cov, int a, int b, int c, int d) {
  return cov(a, b) * cov(c, d) + cov(a, c) * cov(b, d) + cov(a, d) * cov(b, c);
}

namespace {

Mat4 symplectic_omega() {
  Mat4 o = Mat4::Zero();
  o.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  o.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  return o;
}

MinPacketSpec magnetic_packet_spec(const MinPacketSpec& spec, const EvolutionContext& ctx) {
  MinPacketSpec s = spec;
  s.omega = ctx.omega_tilde();
  s.M = ctx.M;
  return s;
}

}  // namespace

double quadratic_mean(const Vec4& mean, const Mat4& cov, const Mat4& K) {
  return 0.5 * (mean.dot(K * mean) + (K * cov).trace());
}

double quadratic_variance(const Vec4& mean, const Mat4& cov, const Mat4& K) {
  // Gaussian (Wigner) moments of a Weyl-ordered quadratic form; the last term is
  // the commutator correction, (1/8) tr((K Omega)^2) with hbar = 1.
  const Mat4 KV = K * cov;
  const Mat4 KO = K * symplectic_omega();
  return mean.dot(K * cov * K * mean) + 0.5 * (KV * KV).trace() + 0.125 * (KO * KO).trace();
}

Mat4 angular_momentum_form() {
  Mat4 K = Mat4::Zero();
  K(X, PY) = K(PY, X) = 1.0;
  K(Y, PX) = K(PX, Y) = -1.0;
  return K;
}

Mat4 hamiltonian_form(const EvolutionContext& ctx) {
  ctx.validate();
  if (ctx.kind == SystemKind::free_particle) {
    Mat4 K = Mat4::Zero();
    K(PX, PX) = K(PY, PY) = 1.0 / ctx.M;
    return K;
  }
  const double wt = ctx.kind == SystemKind::magnetic ? ctx.omega_tilde() : ctx.omega;
  const double wl = ctx.kind == SystemKind::magnetic ? ctx.omega_L : 0.0;
  Mat4 K = Mat4::Zero();
  K(X, X) = K(Y, Y) = ctx.M * wt * wt;
  K(PX, PX) = K(PY, PY) = 1.0 / ctx.M;
  K(X, PY) = K(PY, X) = -wl;
  K(Y, PX) = K(PX, Y) = wl;
  return K;
}

double sigma_L_closed(const MinPacketSpec& spec) {
  spec.validate();
  const double Li = spec.L_i_abs, Lc = spec.L_c_abs;
  const double s = std::sqrt(Li * (1 + Li));
  const double co = spec.co_rotating() ? 2.0 : 0.0;  // 1 + lambda lambda_c
  return Lc + 2 * Li * (1 + Li) + co * Lc * (Li - s * std::cos(2 * spec.w()));
}

double sigma_L_wick(const MinPacketSpec& spec) {
  const RealParams p = build_min_packet(spec);
  const GaussianState g = gaussian_state(p);
  const Mat4& c = g.cov;
  const double x0 = g.x0, y0 = g.y0, px0 = g.px0, py0 = g.py0;
  const double Li = angular_split(p).L_i;

  // L - <L> = l1 + (l2 - L_i) with l1 = x0 dpy + py0 dx - y0 dpx - px0 dy and
  // l2 = dx dpy - dy dpx; odd central moments vanish.
  const double l1sq = x0 * x0 * c(PY, PY) + py0 * py0 * c(X, X) + y0 * y0 * c(PX, PX) + px0 * px0 * c(Y, Y) +
                      2 * x0 * py0 * c(X, PY) - 2 * x0 * y0 * c(PX, PY) - 2 * x0 * px0 * c(Y, PY) -
                      2 * py0 * y0 * c(X, PX) - 2 * py0 * px0 * c(X, Y) + 2 * y0 * px0 * c(Y, PX);
  // x py y px + y px x py = 2 W(x px) W(y py) + 1/2 after reordering.
  const double l2sq = wick_fourth_moment(c, X, X, PY, PY) + wick_fourth_moment(c, Y, Y, PX, PX) -
                      2 * wick_fourth_moment(c, X, PX, Y, PY) - 0.5;
  return l1sq + l2sq - Li * Li;
}

double sigma_L(const MinPacketSpec& spec) {
  const double closed = sigma_L_closed(spec);
  const double wick = sigma_L_wick(spec);
  if (std::abs(closed - wick) > 1e-10 * std::max(1.0, std::abs(closed)))
    throw std::logic_error("sigma_L closed form disagrees with the fourth-moment expansion");
  return closed;
}

double sigma_E_magnetic_closed(const MinPacketSpec& spec, double omega_L) {
  spec.validate();
  if (omega_L == 0.0) throw DomainError("omega_L must be non-zero");
  // The closed form assumes omega_L > 0; a mirror reflection flips both
  // rotation signs and leaves w unchanged.
  const double sgn = omega_L > 0 ? 1.0 : -1.0;
  const double lam = sgn * spec.lambda, lamc = sgn * spec.lambda_c;
  const double Li = spec.L_i_abs, Lc = spec.L_c_abs;
  const double s = std::sqrt(Li * (1 + Li));
  return 2 * (1 - lamc) * (1 - lam) * Lc * (Li - s * std::cos(2 * spec.w())) + 2 * Lc * (1 - lamc) +
         4 * Li * (1 + Li) * (1 - lam);
}

double sigma_E(const MinPacketSpec& spec, const EvolutionContext& ctx) {
  ctx.validate();
  switch (ctx.kind) {
    case SystemKind::free_particle:
      throw DomainError("energy variance is only defined for the oscillator and magnetic systems");
    case SystemKind::oscillator: {
      MinPacketSpec s = spec;
      s.omega = ctx.omega;
      s.M = ctx.M;
      return ctx.omega * ctx.omega * sigma_L(s);
    }
    case SystemKind::magnetic: {
      const MinPacketSpec s = magnetic_packet_spec(spec, ctx);
      const GaussianState g = gaussian_state(build_min_packet(s));
      const double generic = quadratic_variance(g.mean(), g.cov, hamiltonian_form(ctx));
      if (ctx.omega != 0.0) return generic;
      const double closed = ctx.omega_L * ctx.omega_L * sigma_E_magnetic_closed(s, ctx.omega_L);
      if (std::abs(closed - generic) > 1e-9 * std::max(1.0, std::abs(closed)) * ctx.omega_L * ctx.omega_L)
        throw std::logic_error("magnetic sigma_E closed form disagrees with the Wick variance");
      return closed;
    }
  }
  return 0.0;
}

VarianceReport variance_report(const MinPacketSpec& spec, const EvolutionContext& ctx) {
  VarianceReport r;
  r.sigma_L = sigma_L(spec);
  r.sigma_E = sigma_E(spec, ctx);
  r.w = spec.w();
  r.co_rotating = spec.co_rotating();
  r.L_total = spec.L_total();
  r.energy = ctx.kind == SystemKind::magnetic ? magnetic_energy(spec, ctx) : ctx.omega * mean_energy(spec);
  return r;
}

SubPoissonOptimum subpoisson_optimum(double L_i) {
  if (!(L_i >= 0) || !std::isfinite(L_i)) throw DomainError("L_i must be finite and non-negative");
  const double s = std::sqrt(L_i * (1 + L_i));
  SubPoissonOptimum o;
  o.L_total = s * (1 + 8 * L_i + 8 * L_i * L_i) + 5 * L_i + 12 * L_i * L_i + 8 * L_i * L_i * L_i;
  o.sigma_min = 4 * L_i * (1 + L_i) + (1 + 2 * L_i) * s;
  const double eta = std::sqrt(L_i / (1 + L_i));
  o.eccentricity = std::sqrt(2 * eta / (1 + eta));
  return o;
}

double sigma_L_fixed_total(double L_i, double L_total) {
  const double Lc = L_total - L_i;
  return Lc + 2 * L_i * (1 + L_i) + 2 * Lc * (L_i - std::sqrt(L_i * (1 + L_i)));
}

GoldenResult minimize_sigma_at_fixed_total(double L_total, double xtol) {
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double a = 0.0, b = L_total;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = sigma_L_fixed_total(c, L_total), fd = sigma_L_fixed_total(d, L_total);
  while (b - a > xtol * std::max(1.0, L_total)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = sigma_L_fixed_total(c, L_total);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = sigma_L_fixed_total(d, L_total);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, sigma_L_fixed_total(x, L_total)};
}

}  // namespace gausspack
