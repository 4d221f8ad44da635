#include "gausspack/oracle/propagate.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "gausspack/oracle/phase_space.hpp"
#include "gausspack/simd/kernels.hpp"

namespace gausspack::oracle {

namespace {

constexpr double kSingular = 1e-8;

double wrap(double a) { return std::remainder(a, 2 * std::numbers::pi); }

// exp(i kappa (k_rr r'^2 - 2 q . r') + i phase0) times a constant; the kernel
// of every system has this shape once r is fixed.
struct KernelShape {
  cplx prefactor;
  double kappa = 0.0, k_rr = 0.0;
  double qx = 0.0, qy = 0.0;  // effective output point
  double phase0 = 0.0;
};

KernelShape kernel_shape(const EvolutionContext& ctx, double t, double x, double y) {
  ctx.validate();
  const cplx I{0.0, 1.0};
  KernelShape k;
  if (ctx.kind == SystemKind::free_particle) {
    if (t == 0.0) throw DomainError("free propagator is singular at t = 0");
    // (M / 2 pi i t) exp(i M |r - r'|^2 / 2 t)
    k.prefactor = ctx.M / (2 * std::numbers::pi * I * t);
    k.kappa = ctx.M / (2 * t);
    k.k_rr = 1.0;
    k.qx = x;
    k.qy = y;
    k.phase0 = k.kappa * (x * x + y * y);
    return k;
  }
  double w = ctx.omega, qx = x, qy = y;
  if (ctx.kind == SystemKind::magnetic) {
    // exp(-i H t) = exp(i omega_L t L_z) exp(-i H_osc t): the oscillator kernel
    // evaluated at the rotated output point.
    w = std::sqrt(ctx.omega * ctx.omega + ctx.omega_L * ctx.omega_L);
    const double c = std::cos(ctx.omega_L * t), s = std::sin(ctx.omega_L * t);
    qx = c * x - s * y;
    qy = s * x + c * y;
  }
  const double sn = std::sin(w * t), cs = std::cos(w * t);
  if (std::abs(sn) < kSingular) throw DomainError("oscillator propagator is singular at this time");
  const double mu = ctx.M * w;
  // (mu / 2 pi i sin) exp(i mu / (2 sin) [cos (r^2 + r'^2) - 2 r . r'])
  k.prefactor = mu / (2 * std::numbers::pi * I * sn);
  k.kappa = mu / (2 * sn);
  k.k_rr = cs;
  k.qx = qx;
  k.qy = qy;
  k.phase0 = k.kappa * cs * (qx * qx + qy * qy);
  return k;
}

}  // namespace

cplx propagator(const EvolutionContext& ctx, double t, double x, double y, double xp, double yp) {
  const KernelShape k = kernel_shape(ctx, t, x, y);
  const double ph = k.phase0 + k.kappa * (k.k_rr * (xp * xp + yp * yp) - 2 * (k.qx * xp + k.qy * yp));
  return k.prefactor * std::polar(1.0, ph);
}

GaussianFit fit_gaussian(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<cplx>& values,
                         int nx, int ny, double mu, const std::vector<double>& phase_guess) {
  const int n = nx * ny;
  if (static_cast<int>(xs.size()) != n || static_cast<int>(values.size()) != n ||
      static_cast<int>(phase_guess.size()) != n)
    throw DomainError("fit grid size mismatch");
  for (const cplx& v : values)
    if (!(std::abs(v) > 0) || !std::isfinite(std::abs(v))) throw DomainError("cannot fit a vanishing sample");

  // Unwrap the detrended phase along the center row, then along each column.
  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) d[k] = wrap(std::arg(values[k]) - phase_guess[k]);
  const int ci = nx / 2, cj = ny / 2;
  auto at = [&](int i, int j) -> double& { return d[j * nx + i]; };
  for (int i = ci + 1; i < nx; ++i) at(i, cj) = at(i - 1, cj) + wrap(at(i, cj) - at(i - 1, cj));
  for (int i = ci - 1; i >= 0; --i) at(i, cj) = at(i + 1, cj) + wrap(at(i, cj) - at(i + 1, cj));
  for (int i = 0; i < nx; ++i) {
    for (int j = cj + 1; j < ny; ++j) at(i, j) = at(i, j - 1) + wrap(at(i, j) - at(i, j - 1));
    for (int j = cj - 1; j >= 0; --j) at(i, j) = at(i, j + 1) + wrap(at(i, j) - at(i, j + 1));
  }

  const double xc = xs[cj * nx + ci], yc = ys[cj * nx + ci];
  double hx = 0.0, hy = 0.0;
  for (int k = 0; k < n; ++k) {
    hx = std::max(hx, std::abs(xs[k] - xc));
    hy = std::max(hy, std::abs(ys[k] - yc));
  }
  if (!(hx > 0) || !(hy > 0)) throw DomainError("degenerate fit grid");

  Eigen::MatrixXd A(n, 6);
  Eigen::VectorXd br(n), bi(n);
  for (int k = 0; k < n; ++k) {
    const double X = (xs[k] - xc) / hx, Y = (ys[k] - yc) / hy;
    A.row(k) << 1.0, X, Y, X * X, X * Y, Y * Y;
    br(k) = std::log(std::abs(values[k]));
    bi(k) = d[k] + phase_guess[k];
  }
  const auto qr = A.colPivHouseholderQr();
  const Eigen::VectorXd kr = qr.solve(br), ki = qr.solve(bi);
  const double res = std::sqrt(((A * kr - br).squaredNorm() + (A * ki - bi).squaredNorm()) / n);

  // Back to unscaled, uncentered coordinates.
  auto coeffs = [&](const Eigen::VectorXd& k) {
    const double kx = k(1) / hx, ky = k(2) / hy;
    const double kxx = k(3) / (hx * hx), kxy = k(4) / (hx * hy), kyy = k(5) / (hy * hy);
    return std::array<double, 5>{kx - 2 * kxx * xc - kxy * yc, ky - kxy * xc - 2 * kyy * yc, kxx, kxy, kyy};
  };
  const auto r = coeffs(kr), i = coeffs(ki);
  RealParams p;
  p.mu = mu;
  p.F1 = r[0];
  p.G1 = r[1];
  p.alpha = -2 * r[2] / mu;
  p.beta = -r[3] / mu;
  p.gamma = -2 * r[4] / mu;
  p.F2 = i[0];
  p.G2 = i[1];
  p.chi_a = -i[2] / mu;
  p.rho = -i[3] / mu;
  p.chi_c = -i[4] / mu;
  return {p, res};
}

PropagationResult propagate_numeric(const RealParams& p0, const EvolutionContext& ctx, double t,
                                    const QuadratureSpec& spec, double fit_tolerance) {
  validate(p0);
  ctx.validate();
  spec.validate();

  // Grid placement and phase guess from the moment flow: the local momentum of a
  // pure Gaussian is p0 + C_pr C_rr^{-1} (r - r0).
  const GaussianState s = evolve_state_numeric(gaussian_state(p0), ctx, t);
  const Eigen::Matrix2d Crr = s.cov.block<2, 2>(0, 0);
  const Eigen::Matrix2d Cpr = s.cov.block<2, 2>(2, 0);
  Eigen::Matrix2d S = Cpr * Crr.inverse();
  S = 0.5 * (S + S.transpose()).eval();
  const double sx = std::sqrt(Crr(0, 0)), sy = std::sqrt(Crr(1, 1));

  constexpr int N = kPropagationGrid;
  PropagationResult out;
  out.xs.resize(N * N);
  out.ys.resize(N * N);
  out.values.resize(N * N);
  std::vector<double> guess(N * N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const int k = j * N + i;
      const double X = 2 * sx * (2.0 * i / (N - 1) - 1), Y = 2 * sy * (2.0 * j / (N - 1) - 1);
      out.xs[k] = s.x0 + X;
      out.ys[k] = s.y0 + Y;
      guess[k] = s.px0 * X + s.py0 * Y + 0.5 * (S(0, 0) * X * X + 2 * S(0, 1) * X * Y + S(1, 1) * Y * Y);
    }

  if (t == 0.0) {
    for (int k = 0; k < N * N; ++k) out.values[k] = psi(p0, out.xs[k], out.ys[k]);
  } else {
    std::vector<KernelShape> shapes(N * N);
    for (int k = 0; k < N * N; ++k) shapes[k] = kernel_shape(ctx, t, out.xs[k], out.ys[k]);

    simd::Quadratic re0, im0;
    re0.c1 = p0.F1;
    re0.c2 = p0.G1;
    re0.c3 = -p0.mu * p0.alpha / 2;
    re0.c4 = -p0.mu * p0.beta;
    re0.c5 = -p0.mu * p0.gamma / 2;
    im0.c1 = p0.F2;
    im0.c2 = p0.G2;
    im0.c3 = -p0.mu * p0.chi_a;
    im0.c4 = -p0.mu * p0.rho;
    im0.c5 = -p0.mu * p0.chi_c;
    const Box box = packet_box(p0, spec.half_width, std::numbers::sqrt2);
    const double xc = 0.5 * (box.x_lo + box.x_hi), yc = 0.5 * (box.y_lo + box.y_hi);
    const double shift = re0(xc, yc);
    re0.c0 = -shift;

    const simd::KernelTable& kt = simd::active_kernels();
    std::vector<double> vr, vi;
    BatchIntegrand f = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> o) {
      const std::size_t n = xs.size();
      vr.resize(n);
      vi.resize(n);
      for (int k = 0; k < N * N; ++k) {
        const KernelShape& ks = shapes[k];
        simd::Quadratic im = im0;
        im.c1 -= 2 * ks.kappa * ks.qx;
        im.c2 -= 2 * ks.kappa * ks.qy;
        im.c3 += ks.kappa * ks.k_rr;
        im.c5 += ks.kappa * ks.k_rr;
        kt.complex_gaussian(re0, im, xs, ys, vr, vi);
        std::copy(vr.begin(), vr.end(), o.begin() + (2 * k) * n);
        std::copy(vi.begin(), vi.end(), o.begin() + (2 * k + 1) * n);
      }
    };
    const QuadratureResult r = integrate_2d(f, 2 * N * N, box, spec);
    out.panels = r.panels;
    const double log_norm = log_prefactor(p0) + shift;
    for (int k = 0; k < N * N; ++k) {
      const cplx integral{r.values[2 * k], r.values[2 * k + 1]};
      out.values[k] = shapes[k].prefactor * std::polar(std::exp(log_norm), shapes[k].phase0) * integral;
    }
  }

  const GaussianFit fit = fit_gaussian(out.xs, out.ys, out.values, N, N, p0.mu, guess);
  out.fitted = fit.params;
  out.residual = fit.residual;
  out.gaussian = fit.residual < fit_tolerance;
  return out;
}

}  // namespace gausspack::oracle
