#include "gausspack/packet_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gausspack {

ComplexView complex_view(const RealParams& p) {
  return {p.mu, {p.alpha / 2, p.chi_a}, {p.beta, p.rho}, {p.gamma / 2, p.chi_c}, {p.F1, p.F2}, {p.G1, p.G2}};
}

RealParams from_complex(const ComplexView& cv) {
  RealParams p;
  p.mu = cv.mu;
  p.alpha = 2 * cv.a.real();
  p.chi_a = cv.a.imag();
  p.beta = cv.b.real();
  p.rho = cv.b.imag();
  p.gamma = 2 * cv.c.real();
  p.chi_c = cv.c.imag();
  p.F1 = cv.F.real();
  p.F2 = cv.F.imag();
  p.G1 = cv.G.real();
  p.G2 = cv.G.imag();
  return p;
}

bool is_valid(const RealParams& p) {
  const double vals[] = {p.mu, p.alpha, p.beta, p.gamma, p.chi_a, p.chi_c, p.rho, p.F1, p.F2, p.G1, p.G2};
  for (double v : vals)
    if (!std::isfinite(v)) return false;
  if (!(p.mu > 0 && p.alpha > 0 && p.gamma > 0)) return false;
  return p.delta() > 1e-12 * p.alpha * p.gamma;
}

void validate(const RealParams& p) {
  if (!is_valid(p)) throw DomainError("non-normalizable packet");
}

double normalize(const RealParams& p) {
  validate(p);
  return p.mu * std::sqrt(p.delta()) / std::numbers::pi;
}

double log_prefactor(const RealParams& p) {
  const FirstMoments m = first_moments(p);
  const double q = p.alpha * m.x0 * m.x0 + 2 * p.beta * m.x0 * m.y0 + p.gamma * m.y0 * m.y0;
  return 0.5 * (std::log(normalize(p)) - p.mu * q);
}

cplx psi(const RealParams& p, double x, double y) {
  const ComplexView cv = complex_view(p);
  const cplx e = -p.mu * (cv.a * x * x + cv.b * x * y + cv.c * y * y) + cv.F * x + cv.G * y;
  return std::exp(e + log_prefactor(p));
}

double density(const RealParams& p, double x, double y) {
  const FirstMoments m = first_moments(p);
  const double dx = x - m.x0, dy = y - m.y0;
  const double q = p.alpha * dx * dx + 2 * p.beta * dx * dy + p.gamma * dy * dy;
  return normalize(p) * std::exp(-p.mu * q);
}

FirstMoments first_moments(const RealParams& p) {
  validate(p);
  const double md = p.mu * p.delta();
  FirstMoments m;
  m.x0 = (p.gamma * p.F1 - p.beta * p.G1) / md;
  m.y0 = (p.alpha * p.G1 - p.beta * p.F1) / md;
  m.px0 = p.F2 - p.mu * (2 * p.chi_a * m.x0 + p.rho * m.y0);
  m.py0 = p.G2 - p.mu * (2 * p.chi_c * m.y0 + p.rho * m.x0);
  return m;
}

Mat4 covariances(const RealParams& p) {
  validate(p);
  const double a = p.alpha, b = p.beta, g = p.gamma;
  const double xa = p.chi_a, xc = p.chi_c, r = p.rho, mu = p.mu;
  const double D = p.delta();

  const double xx = g / (2 * mu * D);
  const double yy = a / (2 * mu * D);
  const double xy = -b / (2 * mu * D);
  const double pxpx = mu * (g * (a * a + 4 * xa * xa) + a * (r * r - b * b) - 4 * b * r * xa) / (2 * D);
  const double pypy = mu * (a * (g * g + 4 * xc * xc) + g * (r * r - b * b) - 4 * b * r * xc) / (2 * D);
  const double pxpy = mu * (b * (D - r * r - 4 * xa * xc) + 2 * r * (a * xc + g * xa)) / (2 * D);
  const double xpx = (b * r - 2 * g * xa) / (2 * D);
  const double ypy = (b * r - 2 * a * xc) / (2 * D);
  const double xpy = (2 * b * xc - r * g) / (2 * D);
  const double ypx = (2 * b * xa - r * a) / (2 * D);

  Mat4 c;
  c << xx, xy, xpx, xpy,
       xy, yy, ypx, ypy,
       xpx, ypx, pxpx, pxpy,
       xpy, ypy, pxpy, pypy;
  return c;
}

GaussianState gaussian_state(const RealParams& p) {
  const FirstMoments m = first_moments(p);
  return {m.x0, m.y0, m.px0, m.py0, covariances(p)};
}

AngularSplit angular_split(const RealParams& p) {
  const FirstMoments m = first_moments(p);
  AngularSplit s;
  s.L_c = m.x0 * m.py0 - m.y0 * m.px0;
  s.L_i = (2 * p.beta * (p.chi_c - p.chi_a) + p.rho * (p.alpha - p.gamma)) / (2 * p.delta());
  s.L_total = s.L_c + s.L_i;
  return s;
}

AngularSplit angular_split(const GaussianState& g) {
  AngularSplit s;
  s.L_c = g.x0 * g.py0 - g.y0 * g.px0;
  s.L_i = g.cov(X, PY) - g.cov(Y, PX);
  s.L_total = s.L_c + s.L_i;
  return s;
}

std::array<double, 2> probability_current(const RealParams& p, double x, double y, double M) {
  const double rho = density(p, x, y);
  const double vx = p.F2 - p.mu * (p.rho * y + 2 * p.chi_a * x);
  const double vy = p.G2 - p.mu * (p.rho * x + 2 * p.chi_c * y);
  return {rho * vx / M, rho * vy / M};
}

EllipseGeometry ellipse(const RealParams& p, double nu) {
  validate(p);
  if (!(nu > 0)) throw DomainError("ellipse level nu must be positive");
  EllipseGeometry e;
  e.nu = nu;
  const double s = p.alpha + p.gamma;
  const double R = std::hypot(p.alpha - p.gamma, 2 * p.beta);
  e.disc_R = R;
  e.a_plus = std::sqrt(2 * nu / (p.mu * (s - R)));
  e.a_minus = std::sqrt(2 * nu / (p.mu * (s + R)));
  e.eccentricity = std::sqrt(2 * R / (s + R));
  e.area = std::numbers::pi * nu / (p.mu * std::sqrt(p.delta()));
  if (R <= 1e-15 * s) {
    e.theta = 0.0;
  } else {
    // Eigenvector of the smaller eigenvalue of [[alpha, beta], [beta, gamma]].
    e.theta = 0.5 * std::atan2(-2 * p.beta, p.gamma - p.alpha);
    if (e.theta <= -std::numbers::pi / 2) e.theta += std::numbers::pi;
  }
  return e;
}

RealParams rotated(const RealParams& p, double phi) {
  // psi'(r) = psi(R^T r): the quadratic-form matrix becomes R A R^T, the linear
  // term R J.
  const ComplexView cv = complex_view(p);
  const double c = std::cos(phi), s = std::sin(phi);
  const cplx A11 = cv.a, A12 = cv.b / 2.0, A22 = cv.c;
  const cplx B11 = c * c * A11 - 2 * c * s * A12 + s * s * A22;
  const cplx B12 = c * s * (A11 - A22) + (c * c - s * s) * A12;
  const cplx B22 = s * s * A11 + 2 * c * s * A12 + c * c * A22;
  ComplexView out = cv;
  out.a = B11;
  out.b = 2.0 * B12;
  out.c = B22;
  out.F = c * cv.F - s * cv.G;
  out.G = s * cv.F + c * cv.G;
  return from_complex(out);
}

RealParams with_center(const RealParams& p, const FirstMoments& m) {
  validate(p);
  RealParams q = p;
  q.F1 = p.mu * (p.alpha * m.x0 + p.beta * m.y0);
  q.G1 = p.mu * (p.beta * m.x0 + p.gamma * m.y0);
  q.F2 = m.px0 + p.mu * (2 * p.chi_a * m.x0 + p.rho * m.y0);
  q.G2 = m.py0 + p.mu * (2 * p.chi_c * m.y0 + p.rho * m.x0);
  return q;
}

}  // namespace gausspack
