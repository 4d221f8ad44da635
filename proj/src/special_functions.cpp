#include "gausspack/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gausspack::special {

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

namespace {

template <class T>
std::vector<T> hermite_all_impl(int nmax, T x) {
  std::vector<T> h(static_cast<std::size_t>(std::max(nmax, 0)) + 1);
  h[0] = T(1);
  if (nmax >= 1) h[1] = T(2) * x;
  for (int k = 1; k < nmax; ++k)
    h[static_cast<std::size_t>(k) + 1] =
        T(2) * x * h[static_cast<std::size_t>(k)] - T(2.0 * k) * h[static_cast<std::size_t>(k) - 1];
  return h;
}

long long exact_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long exact_factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double hermite(int n, double x) { return hermite_all_impl(n, x).back(); }

std::complex<double> hermite(int n, std::complex<double> z) { return hermite_all_impl(n, z).back(); }

std::vector<double> hermite_all(int nmax, double x) { return hermite_all_impl(nmax, x); }

std::vector<std::complex<double>> hermite_all(int nmax, std::complex<double> z) { return hermite_all_impl(nmax, z); }

std::vector<double> scaled_hermite_all(int nmax, double x) {
  // h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}
  std::vector<double> h(static_cast<std::size_t>(std::max(nmax, 0)) + 1);
  h[0] = 1.0;
  if (nmax >= 1) h[1] = std::sqrt(2.0) * x;
  for (int k = 1; k < nmax; ++k) {
    const double kp = k + 1.0;
    h[static_cast<std::size_t>(k) + 1] = std::sqrt(2.0 / kp) * x * h[static_cast<std::size_t>(k)] -
                                         std::sqrt(k / kp) * h[static_cast<std::size_t>(k) - 1];
  }
  return h;
}

double hermite_at_zero(int n) {
  if (n % 2 != 0) return 0.0;
  const double mag = std::exp(log_abs_hermite_at_zero(n));
  return (n / 2) % 2 == 0 ? mag : -mag;
}

double log_abs_hermite_at_zero(int n) {
  if (n % 2 != 0) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(n / 2);
}

std::vector<double> laguerre_all(int nmax, double a, double x) {
  std::vector<double> L(static_cast<std::size_t>(std::max(nmax, 0)) + 1);
  L[0] = 1.0;
  if (nmax >= 1) L[1] = 1.0 + a - x;
  for (int k = 1; k < nmax; ++k)
    L[static_cast<std::size_t>(k) + 1] =
        ((2.0 * k + 1.0 + a - x) * L[static_cast<std::size_t>(k)] - (k + a) * L[static_cast<std::size_t>(k) - 1]) /
        (k + 1.0);
  return L;
}

double laguerre(int n, double a, double x) { return laguerre_all(n, a, x).back(); }

double mehler_closed_form(double zeta, double x, double y) {
  const double d = 1.0 - zeta * zeta;
  return std::exp((2 * x * y * zeta - (x * x + y * y) * zeta * zeta) / d) / std::sqrt(d);
}

double hermite_shift_closed_form(int n, double t, double x) { return std::exp(2 * x * t - t * t) * hermite(n, x - t); }

long long laguerre_inversion_coefficient(int k, int m, int n) {
  if (n < 0 || n > k) return 0;
  const long long c = exact_factorial(k) * exact_binomial(k + m, k - n);
  return n % 2 == 0 ? c : -c;
}

long long laguerre_coefficient_scaled(int n, int m, int j) {
  const long long c = exact_binomial(n + m, n - j);
  return j % 2 == 0 ? c : -c;
}

}  // namespace gausspack::special
