#include "gausspack/oracle/overlap.hpp"

#include <cmath>
#include <numbers>

#include "gausspack/simd/kernels.hpp"

namespace gausspack::oracle {

cplx lg_mode_reference(const LGMode& mode, double x, double y) {
  const unsigned am = static_cast<unsigned>(std::abs(mode.m));
  const double mu = mode.mu_scale;
  const double s = mu * (x * x + y * y);
  const double L = std::assoc_laguerre(static_cast<unsigned>(mode.n_r), am, s);
  if (am > 0 && s == 0.0) return 0.0;
  const double log_mag = 0.5 * (std::log(mu / std::numbers::pi) + std::lgamma(mode.n_r + 1.0) -
                                std::lgamma(mode.n_r + am + 1.0)) +
                         (am > 0 ? 0.5 * am * std::log(s) : 0.0) - s / 2;
  return std::polar(std::exp(log_mag) * L, mode.m * std::atan2(y, x));
}

std::vector<cplx> overlaps(const RealParams& p, std::span<const LGMode> modes, const QuadratureSpec& spec) {
  validate(p);
  for (const LGMode& m : modes)
    if (m.n_r < 0 || !(m.mu_scale > 0)) throw DomainError("invalid LG mode");

  // log psi up to a real constant: -mu (a x^2 + b x y + c y^2) + F x + G y.
  simd::Quadratic re, im;
  re.c1 = p.F1;
  re.c2 = p.G1;
  re.c3 = -p.mu * p.alpha / 2;
  re.c4 = -p.mu * p.beta;
  re.c5 = -p.mu * p.gamma / 2;
  im.c1 = p.F2;
  im.c2 = p.G2;
  im.c3 = -p.mu * p.chi_a;
  im.c4 = -p.mu * p.rho;
  im.c5 = -p.mu * p.chi_c;
  // Shift so that |psi| peaks near 1 at the packet center.
  const Box box = packet_box(p, spec.half_width, std::numbers::sqrt2);
  const double xc = 0.5 * (box.x_lo + box.x_hi), yc = 0.5 * (box.y_lo + box.y_hi);
  re.c0 = -re(xc, yc);

  const simd::KernelTable& kt = simd::active_kernels();
  const int nm = static_cast<int>(modes.size());
  std::vector<double> pr, pi;
  BatchIntegrand f = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    const std::size_t n = xs.size();
    pr.resize(n);
    pi.resize(n);
    kt.complex_gaussian(re, im, xs, ys, pr, pi);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = pr[i] * pr[i] + pi[i] * pi[i];
      const cplx v{pr[i], pi[i]};
      for (int k = 0; k < nm; ++k) {
        const cplx o = std::conj(lg_mode_reference(modes[k], xs[i], ys[i])) * v;
        out[(1 + 2 * k) * n + i] = o.real();
        out[(2 + 2 * k) * n + i] = o.imag();
      }
    }
  };
  const QuadratureResult r = integrate_2d(f, 1 + 2 * nm, box, spec);
  const double scale = 1 / std::sqrt(r.values[0]);
  std::vector<cplx> c(nm);
  for (int k = 0; k < nm; ++k) c[k] = scale * cplx{r.values[1 + 2 * k], r.values[2 + 2 * k]};
  return c;
}

cplx overlap(const RealParams& p, const LGMode& mode, const QuadratureSpec& spec) {
  return overlaps(p, std::span<const LGMode>(&mode, 1), spec)[0];
}

}  // namespace gausspack::oracle
