#pragma once

#include <complex>
#include <vector>

// Orthogonal polynomials and factorial helpers, all by three-term recurrence.
namespace gausspack::special {

double log_factorial(int n);
double binomial(int n, int k);

// Physicists' Hermite polynomials H_n.
double hermite(int n, double x);
std::complex<double> hermite(int n, std::complex<double> z);
// H_0..H_nmax
std::vector<double> hermite_all(int nmax, double x);
std::vector<std::complex<double>> hermite_all(int nmax, std::complex<double> z);

// h_k = H_k(x) / sqrt(2^k k!), k = 0..nmax; grows like e^{x^2/2}, not k!.
std::vector<double> scaled_hermite_all(int nmax, double x);

// H_n(0): zero for odd n, (-1)^k (2k)!/k! for n = 2k.
double hermite_at_zero(int n);
// log|H_n(0)| for even n (returns -inf for odd n).
double log_abs_hermite_at_zero(int n);

// Associated Laguerre polynomial L_n^(a)(x), a >= 0.
double laguerre(int n, double a, double x);
// L_0^(a)..L_nmax^(a)
std::vector<double> laguerre_all(int nmax, double a, double x);

// Mehler kernel sum_k (zeta/2)^k H_k(x) H_k(y) / k! in closed form, |zeta| < 1.
double mehler_closed_form(double zeta, double x, double y);

// exp(2 x t - t^2) H_n(x - t), the closed form of sum_k t^k H_{n+k}(x) / k!.
double hermite_shift_closed_form(int n, double t, double x);

// Integer coefficient of L_n^(m)(x) in the expansion of x^k:
// (-1)^n k! (k+m)! / ((n+m)! (k-n)!), exact for small k, m.
long long laguerre_inversion_coefficient(int k, int m, int n);

// j! times the coefficient of x^j in L_n^(m)(x): (-1)^j C(n+m, n-j).
long long laguerre_coefficient_scaled(int n, int m, int j);

}  // namespace gausspack::special
