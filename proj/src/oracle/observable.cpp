#include "gausspack/oracle/observable.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "gausspack/simd/kernels.hpp"

namespace gausspack::oracle {

namespace {

constexpr int kDeg = 2 * kMaxObservableDegree;
constexpr int kSide = kDeg + 1;

// Dense polynomial in two variables, coefficient of x^i y^j at [i][j].
struct Poly {
  std::array<std::array<cplx, kSide>, kSide> c{};

  static Poly one() {
    Poly p;
    p.c[0][0] = 1.0;
    return p;
  }
  Poly dx() const {
    Poly r;
    for (int i = 1; i < kSide; ++i)
      for (int j = 0; j < kSide; ++j) r.c[i - 1][j] = c[i][j] * static_cast<double>(i);
    return r;
  }
  Poly dy() const {
    Poly r;
    for (int i = 0; i < kSide; ++i)
      for (int j = 1; j < kSide; ++j) r.c[i][j - 1] = c[i][j] * static_cast<double>(j);
    return r;
  }
  // Multiply by k0 + kx x + ky y.
  Poly times_linear(cplx k0, cplx kx, cplx ky) const {
    Poly r;
    for (int i = 0; i < kSide; ++i)
      for (int j = 0; j < kSide; ++j) {
        if (c[i][j] == cplx{}) continue;
        if (i + j + 1 > kDeg && (kx != cplx{} || ky != cplx{}))
          throw DomainError("observable degree too high");
        r.c[i][j] += k0 * c[i][j];
        if (i + 1 < kSide) r.c[i + 1][j] += kx * c[i][j];
        if (j + 1 < kSide) r.c[i][j + 1] += ky * c[i][j];
      }
    return r;
  }
  Poly shifted_monomial(int a, int b) const {
    Poly r;
    for (int i = 0; i < kSide; ++i)
      for (int j = 0; j < kSide; ++j) {
        if (c[i][j] == cplx{}) continue;
        if (i + a + j + b > kDeg) throw DomainError("observable degree too high");
        r.c[i + a][j + b] = c[i][j];
      }
    return r;
  }
  // Substitute x -> X + x0, y -> Y + y0.
  Poly translated(double x0, double y0) const {
    Poly r;
    for (int i = 0; i < kSide; ++i)
      for (int j = 0; j < kSide; ++j) {
        if (c[i][j] == cplx{}) continue;
        for (int k = 0; k <= i; ++k)
          for (int l = 0; l <= j; ++l)
            r.c[k][l] += c[i][j] * std::tgamma(i + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(i - k + 1.0)) *
                         std::pow(x0, i - k) * std::tgamma(j + 1.0) /
                         (std::tgamma(l + 1.0) * std::tgamma(j - l + 1.0)) * std::pow(y0, j - l);
      }
    return r;
  }
};

int moment_index(int i, int j) {
  // Components ordered by total degree, then by i.
  const int n = i + j;
  return n * (n + 1) / 2 + j;
}

constexpr int kComponents = (kDeg + 1) * (kDeg + 2) / 2;

// (-i)^k without rounding.
cplx neg_i_pow(int k) {
  static const cplx t[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return t[k % 4];
}

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

}  // namespace

Observable Observable::identity() { return {{Monomial{}}, true}; }

Observable Observable::of(Axis axis) {
  Monomial m;
  switch (axis) {
    case X: m.a = 1; break;
    case Y: m.b = 1; break;
    case PX: m.c = 1; break;
    case PY: m.d = 1; break;
  }
  return {{m}, true};
}

Observable Observable::product(Axis first, Axis second) {
  Observable o = of(first) * of(second);
  o.hermitian = false;
  return o;
}

Observable Observable::symmetric_product(Axis first, Axis second) {
  Observable o = (of(first) * of(second) + of(second) * of(first)).scaled(0.5);
  o.hermitian = true;
  return o;
}

Observable Observable::angular_momentum() {
  return of(X) * of(PY) + (of(Y) * of(PX)).scaled(-1.0);
}

Observable Observable::angular_momentum_squared() {
  const Observable L = angular_momentum();
  return L * L;
}

Observable Observable::operator*(const Observable& rhs) const {
  // (x^a y^b px^c py^d)(x^a' y^b' px^c' py^d'): move px^c past x^a' using
  // px^c x^n = sum_k C(c,k) n!/(n-k)! (-i)^k x^(n-k) px^(c-k).
  std::map<std::tuple<int, int, int, int>, cplx> acc;
  for (const Monomial& l : terms)
    for (const Monomial& r : rhs.terms)
      for (int k = 0; k <= std::min(l.c, r.a); ++k)
        for (int q = 0; q <= std::min(l.d, r.b); ++q) {
          const double fk = binom(l.c, k) * std::tgamma(r.a + 1.0) / std::tgamma(r.a - k + 1.0);
          const double fq = binom(l.d, q) * std::tgamma(r.b + 1.0) / std::tgamma(r.b - q + 1.0);
          const cplx f = l.coeff * r.coeff * fk * fq * neg_i_pow(k + q);
          acc[{l.a + r.a - k, l.b + r.b - q, l.c - k + r.c, l.d - q + r.d}] += f;
        }
  Observable o;
  o.hermitian = hermitian && rhs.hermitian;
  for (const auto& [key, v] : acc) {
    if (v == cplx{}) continue;
    auto [a, b, c, d] = key;
    o.terms.push_back({v, a, b, c, d});
  }
  return o;
}

Observable Observable::operator+(const Observable& rhs) const {
  Observable o = *this;
  o.terms.insert(o.terms.end(), rhs.terms.begin(), rhs.terms.end());
  o.hermitian = hermitian && rhs.hermitian;
  return o;
}

Observable Observable::scaled(cplx s) const {
  Observable o = *this;
  for (Monomial& m : o.terms) m.coeff *= s;
  if (s.imag() != 0.0) o.hermitian = false;
  return o;
}

int Observable::degree() const {
  int d = 0;
  for (const Monomial& m : terms) d = std::max(d, m.a + m.b + m.c + m.d);
  return d;
}

MomentOracle::MomentOracle(const RealParams& p, const QuadratureSpec& spec) : p_(p), spec_(spec) {
  validate(p);
  spec.validate();
  const Box box = packet_box(p, spec.half_width);
  xc_ = 0.5 * (box.x_lo + box.x_hi);
  yc_ = 0.5 * (box.y_lo + box.y_hi);
  // Work in units of the widest standard deviation so that high moments stay
  // of order one.
  const double sigma = (box.x_hi - box.x_lo) / (2 * spec.half_width);
  const double h = spec.half_width;
  const Box local{-h, h, -h, h};

  // About the maximum the density is exp(-mu (alpha X^2 + 2 beta X Y + gamma Y^2)).
  simd::Quadratic q;
  q.c3 = -p.mu * p.alpha * sigma * sigma;
  q.c4 = -2 * p.mu * p.beta * sigma * sigma;
  q.c5 = -p.mu * p.gamma * sigma * sigma;
  const simd::KernelTable& kt = simd::active_kernels();
  std::vector<double> g;
  BatchIntegrand f = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    const std::size_t n = xs.size();
    g.resize(n);
    kt.gaussian(q, xs, ys, g);
    for (std::size_t i = 0; i < n; ++i) {
      double px = g[i];
      for (int a = 0; a <= kDeg; ++a) {
        double v = px;
        for (int b = 0; a + b <= kDeg; ++b) {
          out[moment_index(a, b) * n + i] = v;
          v *= ys[i];
        }
        px *= xs[i];
      }
    }
  };
  raw_ = integrate_2d(f, kComponents, local, spec);
  for (int i = 0; i <= kDeg; ++i)
    for (int j = 0; i + j <= kDeg; ++j) {
      const double s = std::pow(sigma, i + j + 2);
      raw_.values[moment_index(i, j)] *= s;
      raw_.errors[moment_index(i, j)] *= s;
    }
}

cplx MomentOracle::evaluate(const Observable& obs, double& error_bound) const {
  if (obs.degree() > kMaxObservableDegree) throw DomainError("observable degree exceeds 4");
  // d_x log psi and d_y log psi, both linear in (x, y).
  const cplx a{p_.alpha / 2, p_.chi_a}, b{p_.beta, p_.rho}, c{p_.gamma / 2, p_.chi_c};
  const cplx F{p_.F1, p_.F2}, G{p_.G1, p_.G2};
  const double mu = p_.mu;
  const cplx gx0 = F, gxx = -2.0 * mu * a, gxy = -mu * b;
  const cplx gy0 = G, gyx = -mu * b, gyy = -2.0 * mu * c;

  Poly total;
  for (const Monomial& m : obs.terms) {
    // psi^{-1} d_x^c d_y^d psi by the recursion P -> dP + g P.
    Poly P = Poly::one();
    for (int k = 0; k < m.d; ++k) {
      const Poly t = P.times_linear(gy0, gyx, gyy);
      const Poly d = P.dy();
      for (int i = 0; i < kSide; ++i)
        for (int j = 0; j < kSide; ++j) P.c[i][j] = t.c[i][j] + d.c[i][j];
    }
    for (int k = 0; k < m.c; ++k) {
      const Poly t = P.times_linear(gx0, gxx, gxy);
      const Poly d = P.dx();
      for (int i = 0; i < kSide; ++i)
        for (int j = 0; j < kSide; ++j) P.c[i][j] = t.c[i][j] + d.c[i][j];
    }
    const cplx factor = m.coeff * neg_i_pow(m.c + m.d);
    const Poly term = P.shifted_monomial(m.a, m.b);
    for (int i = 0; i < kSide; ++i)
      for (int j = 0; j < kSide; ++j) total.c[i][j] += factor * term.c[i][j];
  }

  const Poly local = total.translated(xc_, yc_);
  const double norm = raw_.values[0];
  cplx sum{};
  double bound = 0.0;
  for (int i = 0; i < kSide; ++i)
    for (int j = 0; i + j <= kDeg; ++j) {
      const cplx k = local.c[i][j];
      if (k == cplx{}) continue;
      const int idx = moment_index(i, j);
      sum += k * raw_.values[idx];
      bound += std::abs(k) * (raw_.errors[idx] + std::abs(raw_.values[idx]) * raw_.errors[0] / norm);
    }
  error_bound = bound / norm;
  return sum / norm;
}

cplx MomentOracle::expectation_complex(const Observable& obs) const {
  double bound = 0.0;
  return evaluate(obs, bound);
}

double MomentOracle::expectation(const Observable& obs) const {
  double bound = 0.0;
  const cplx v = evaluate(obs, bound);
  if (obs.hermitian && std::abs(v.imag()) > std::max(spec_.abs_tol, 10 * bound + 1e-12 * std::abs(v.real())))
    throw ToleranceNotMet("imaginary residue " + std::to_string(v.imag()) + " for a Hermitian observable");
  return v.real();
}

FirstMoments MomentOracle::first_moments() const {
  FirstMoments m;
  m.x0 = expectation(Observable::of(X));
  m.y0 = expectation(Observable::of(Y));
  m.px0 = expectation(Observable::of(PX));
  m.py0 = expectation(Observable::of(PY));
  return m;
}

GaussianState MomentOracle::state() const {
  const FirstMoments m = first_moments();
  GaussianState s{m.x0, m.y0, m.px0, m.py0, Mat4::Zero()};
  const Vec4 mean = s.mean();
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double v = expectation(Observable::symmetric_product(Axis(i), Axis(j))) - mean(i) * mean(j);
      s.cov(i, j) = s.cov(j, i) = v;
    }
  return s;
}

double expectation(const RealParams& p, const Observable& obs, const QuadratureSpec& spec) {
  return MomentOracle(p, spec).expectation(obs);
}

double quadrature_norm(const RealParams& p, const QuadratureSpec& spec) {
  const Box box = packet_box(p, spec.half_width);
  BatchIntegrand f = [&](std::span<const double> xs, std::span<const double> ys, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::norm(psi(p, xs[i], ys[i]));
  };
  return integrate_2d(f, 1, box, spec).values[0];
}

}  // namespace gausspack::oracle
