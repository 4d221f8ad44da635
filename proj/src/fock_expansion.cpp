#include "gausspack/fock_expansion.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gausspack/special_functions.hpp"

namespace gausspack {

using special::log_factorial;

cplx lg_mode_eval(const LGMode& mode, double r, double phi) {
  if (mode.n_r < 0) throw DomainError("LG mode needs n_r >= 0");
  if (!(mode.mu_scale > 0)) throw DomainError("LG mode needs mu_scale > 0");
  const int am = std::abs(mode.m);
  const double s = mode.mu_scale * r * r;
  const double L = special::laguerre(mode.n_r, am, s);
  // log of sqrt(mu n!/(pi (n+|m|)!)) (mu r^2)^{|m|/2} e^{-s/2}, guarded against
  // overflow of the factorials and powers for large indices.
  double log_mag = 0.5 * (std::log(mode.mu_scale / std::numbers::pi) + log_factorial(mode.n_r) -
                          log_factorial(mode.n_r + am)) -
                   s / 2;
  if (am > 0) {
    if (s == 0.0) return 0.0;
    log_mag += 0.5 * am * std::log(s);
  }
  return std::polar(std::exp(log_mag) * L, mode.m * phi);
}

cplx lg_mode_eval_xy(const LGMode& mode, double x, double y) {
  return lg_mode_eval(mode, std::hypot(x, y), std::atan2(y, x));
}

double lg_energy(const LGMode& mode, double omega) { return omega * (1.0 + std::abs(mode.m) + 2.0 * mode.n_r); }

cplx FockCoefficients::at(int n_r, int m) const {
  const auto it = entries.find({n_r, m});
  return it == entries.end() ? cplx{} : it->second;
}

double FockCoefficients::norm() const {
  double s = 0.0;
  for (const auto& [k, c] : entries) s += std::norm(c);
  return s;
}

double FockCoefficients::mean_m() const {
  double s = 0.0;
  for (const auto& [k, c] : entries) s += k.second * std::norm(c);
  return s;
}

double FockCoefficients::second_moment_m() const {
  double s = 0.0;
  for (const auto& [k, c] : entries) s += static_cast<double>(k.second) * k.second * std::norm(c);
  return s;
}

double FockCoefficients::variance_m() const {
  const double m1 = mean_m();
  return second_moment_m() - m1 * m1;
}

double FockCoefficients::mean_energy_index() const {
  double s = 0.0;
  for (const auto& [k, c] : entries) s += (1.0 + std::abs(k.second) + 2.0 * k.first) * std::norm(c);
  return s;
}

FockCoefficients coherent_coeffs(double L_c_abs, int lambda_c, double v, int kmax) {
  if (!(L_c_abs >= 0)) throw DomainError("L_c must be non-negative");
  FockCoefficients out;
  for (int k = 0; k <= kmax; ++k) {
    double mag;
    if (L_c_abs == 0.0)
      mag = k == 0 ? 1.0 : 0.0;
    else
      mag = std::exp(0.5 * k * std::log(L_c_abs) - 0.5 * log_factorial(k) - L_c_abs / 2);
    out.entries[{0, k * lambda_c}] = std::polar(mag, -k * lambda_c * v);
  }
  out.truncation = kmax;
  out.tail = 1.0 - out.norm();
  return out;
}

FockCoefficients squeezed_coeffs(double eta, int lambda, double u, int kmax) {
  if (!(eta >= 0 && eta < 1)) throw DomainError("eta must lie in [0, 1)");
  FockCoefficients out;
  const double pre = 0.25 * std::log1p(-eta * eta);
  for (int k = 0; k <= kmax; ++k) {
    double mag;
    if (eta == 0.0)
      mag = k == 0 ? 1.0 : 0.0;
    else
      mag = std::exp(pre + k * std::log(eta) + 0.5 * log_factorial(2 * k) - k * std::log(2.0) - log_factorial(k));
    if (k % 2 == 1) mag = -mag;
    out.entries[{0, 2 * k * lambda}] = std::polar(mag, -k * lambda * u);
  }
  out.truncation = 2 * kmax;
  out.tail = 1.0 - out.norm();
  return out;
}

FockCoefficients corotating_coeffs(const MinPacketSpec& spec, int kmax, const TruncationPolicy& policy) {
  spec.validate();
  if (!spec.co_rotating()) throw DomainError("corotating_coeffs needs lambda == lambda_c");
  const double eta = spec.eta();
  const double Lc = spec.L_c_abs;
  const double w = spec.w();
  const int lam = spec.lambda;
  const cplx half_u = std::polar(1.0, -lam * spec.u / 2);

  // h_k = t^k H_k(B) / sqrt(k!) with t = sqrt(eta/2) e^{-i lambda u/2}; the
  // products B t and t^2 stay finite as eta -> 0.
  const cplx Bt = (eta * std::polar(1.0, w) + std::polar(1.0, -w)) * std::sqrt(Lc) / 2.0 * half_u;
  const cplx t2 = eta / 2 * half_u * half_u;
  const double log_pre = 0.25 * std::log1p(-eta * eta) - Lc * (1 + eta * std::cos(2 * w)) / 2;

  FockCoefficients out;
  const bool adaptive = kmax < 0;
  const int limit = adaptive ? policy.cap : kmax;
  cplx h_prev = 0.0, h = 1.0;
  double log_scale = 0.0;
  double total = 0.0;
  int k = 0;
  for (;; ++k) {
    const cplx c = h * std::exp(log_scale + log_pre);
    out.entries[{0, k * lam}] = c;
    total += std::norm(c);
    out.truncation = k;
    // Stop once the norm tail is small and the newest term no longer moves the
    // second moment in m.
    if (adaptive && 1.0 - total < policy.tail_tol && k > spec.L_total() &&
        (1.0 + static_cast<double>(k) * k) * std::norm(c) < 1e-3 * policy.tail_tol)
      break;
    if (k >= limit) {
      if (adaptive) out.truncation_warning = true;
      break;
    }
    const cplx next = (2.0 * Bt * h - 2.0 * t2 * std::sqrt(static_cast<double>(k)) * h_prev) / std::sqrt(k + 1.0);
    h_prev = h;
    h = next;
    const double mag = std::abs(h);
    if (mag > 1e150 || (mag < 1e-150 && mag > 0)) {
      h /= mag;
      h_prev /= mag;
      log_scale += std::log(mag);
    }
  }
  out.tail = 1.0 - out.norm();
  return out;
}

namespace {

// Anti-rotating coefficient for paper index m_p (signed, before the lambda
// reflection) and radial index n.
cplx antirotating_entry(const MinPacketSpec& s, int n, int m_p) {
  const double eta = s.eta();
  const double Lc = s.L_c_abs;
  const double w = s.w();
  const int am = std::abs(m_p);
  // Parity rules: H_{m+n}(0) for m >= 0, H_n(0) for m < 0.
  const int hidx = m_p >= 0 ? m_p + n : n;
  if (hidx % 2 != 0) return 0.0;

  const double B1_abs = std::sqrt(Lc * eta / 2);
  if (n > 0 && B1_abs == 0.0) return 0.0;
  if (m_p > 0 && eta == 0.0) return 0.0;
  if (m_p < 0 && Lc == 0.0) return 0.0;

  double log_mag = 0.25 * std::log1p(-eta * eta) - Lc / 2 - 0.5 * (log_factorial(n) + log_factorial(n + am)) +
                   special::log_abs_hermite_at_zero(hidx);
  if (n > 0) log_mag += n * std::log(B1_abs);
  double phase = n * (std::numbers::pi + w) + std::sin(2 * w) * Lc * eta / 2;
  if (m_p >= 0) {
    if (m_p > 0) log_mag += 0.5 * m_p * std::log(eta / 2);
    phase += -s.lambda * s.u * m_p / 2;
  } else {
    log_mag += 0.5 * am * std::log(Lc);
    phase += s.lambda * s.v * am;
  }
  if ((hidx / 2) % 2 != 0) phase += std::numbers::pi;
  return std::polar(std::exp(log_mag), phase);
}

}  // namespace

FockCoefficients antirotating_coeffs(const MinPacketSpec& spec, int nmax, int mmax, const TruncationPolicy& policy) {
  spec.validate();
  if (spec.co_rotating()) throw DomainError("antirotating_coeffs needs lambda == -lambda_c");
  const int lam = spec.lambda;
  FockCoefficients out;

  auto add = [&](int n, int m_p) {
    const cplx c = antirotating_entry(spec, n, m_p);
    if (c != cplx{}) out.entries[{n, lam * m_p}] = c;
  };

  if (nmax >= 0 && mmax >= 0) {
    for (int n = 0; n <= nmax; ++n)
      for (int m_p = -mmax; m_p <= mmax; ++m_p) add(n, m_p);
    out.truncation = 2 * nmax + mmax;
    out.tail = 1.0 - out.norm();
    return out;
  }

  // Shells of constant 2 n + |m|, i.e. constant oscillator energy.
  double total = 0.0;
  for (int N = 0;; ++N) {
    double shell = 0.0;
    for (int n = 0; 2 * n <= N; ++n) {
      const int am = N - 2 * n;
      for (int sign : {1, -1}) {
        if (am == 0 && sign < 0) continue;
        const int m_p = sign * am;
        const cplx c = antirotating_entry(spec, n, m_p);
        if (c == cplx{}) continue;
        out.entries[{n, lam * m_p}] = c;
        total += std::norm(c);
        shell += (1.0 + static_cast<double>(m_p) * m_p) * std::norm(c);
      }
    }
    out.truncation = N;
    const double mean_index = 1.0 + spec.L_i_abs + spec.L_c_abs;
    if (1.0 - total < policy.tail_tol && N > mean_index && shell < 1e-3 * policy.tail_tol) break;
    if (N >= policy.cap) {
      out.truncation_warning = true;
      break;
    }
  }
  out.tail = 1.0 - out.norm();
  return out;
}

FockCoefficients expand(const MinPacketSpec& spec, const TruncationPolicy& policy) {
  return spec.co_rotating() ? corotating_coeffs(spec, -1, policy) : antirotating_coeffs(spec, -1, -1, policy);
}

cplx generating_function(const MinPacketSpec& spec, cplx z) {
  spec.validate();
  if (!spec.co_rotating()) throw DomainError("generating function is defined for co-rotating packets");
  if (std::abs(z) > 1.0 + 1e-15) throw DomainError("generating function needs |z| <= 1");
  const double eta = spec.eta();
  const double Lc = spec.L_c_abs;
  const double c2w = std::cos(2 * spec.w());
  const cplx d = 1.0 - z * z * eta * eta;
  const cplx expo = Lc * (z - 1.0) / d * (1.0 - z * eta * eta + eta * (1.0 - z) * c2w);
  return std::sqrt((1.0 - eta * eta) / d) * std::exp(expo);
}

GeneratingDerivatives generating_derivatives(const MinPacketSpec& spec) {
  spec.validate();
  if (!spec.co_rotating()) throw DomainError("generating function is defined for co-rotating packets");
  // With f = log G: G'(1) = f'(1), G''(1) = f''(1) + f'(1)^2.
  const double eta = spec.eta();
  const double e2 = eta * eta;
  const double Lc = spec.L_c_abs;
  const double c2w = std::cos(2 * spec.w());
  const double f1 = e2 / (1 - e2) + Lc;
  const double f2 = e2 / (1 - e2) + 2 * e2 * e2 / ((1 - e2) * (1 - e2)) + 2 * Lc * (e2 - eta * c2w) / (1 - e2);
  return {f1, f2 + f1 * f1};
}

double antirotating_normalization_series(double x, double y, int nmax, int mmax) {
  double sum = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    if (n % 2 == 0)
      sum += std::exp((n > 0 ? n * std::log(x * y) : 0.0) - 2 * log_factorial(n) +
                      2 * special::log_abs_hermite_at_zero(n));
    for (int m = 1; m <= mmax; ++m) {
      const double base = (n > 0 ? n * std::log(x * y) : 0.0) - log_factorial(n) - log_factorial(m + n);
      if ((m + n) % 2 == 0)
        sum += std::exp(base + m * std::log(x) + 2 * special::log_abs_hermite_at_zero(m + n));
      if (n % 2 == 0) sum += std::exp(base + m * std::log(y) + 2 * special::log_abs_hermite_at_zero(n));
    }
  }
  return sum;
}

double antirotating_normalization_closed(double x, double y) {
  if (!(x >= 0 && x < 0.5) || !(y >= 0)) throw DomainError("normalization identity needs 0 <= x < 1/2, y >= 0");
  return std::exp(y) / std::sqrt(1 - 4 * x * x);
}

double asymptotic_pk(const MinPacketSpec& spec, int k) {
  const double L = spec.L_total();
  const double Lc = spec.L_c_abs;
  const double c = std::cos(std::sqrt(2 * Lc * (2 * k + 1.0)) - k * std::numbers::pi / 2);
  return 2 * std::exp(-k / L) / std::sqrt(std::numbers::pi * k * L) * c * c;
}

}  // namespace gausspack
