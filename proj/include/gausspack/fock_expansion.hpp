#pragma once

#include <complex>
#include <map>
#include <utility>

#include "gausspack/minimal_energy.hpp"

// Expansion of minimal packets over the Laguerre-Gauss eigenbasis of the
// isotropic oscillator.
namespace gausspack {

struct LGMode {
  int n_r = 0;
  int m = 0;
  double mu_scale = 1.0;
};

// sqrt(mu n!/(pi (n+|m|)!)) (mu r^2)^{|m|/2} L_n^{(|m|)}(mu r^2) exp(-mu r^2/2 + i m phi)
cplx lg_mode_eval(const LGMode& mode, double r, double phi);
cplx lg_mode_eval_xy(const LGMode& mode, double x, double y);

// hbar omega (1 + |m| + 2 n_r)
double lg_energy(const LGMode& mode, double omega);

struct FockCoefficients {
  // (n_r, m) -> amplitude, m is the physical azimuthal number.
  std::map<std::pair<int, int>, cplx> entries;
  // Largest 2 n_r + |m| included.
  int truncation = 0;
  // 1 - sum |c|^2 at the point where the series was cut.
  double tail = 0.0;
  // Set when the adaptive cap was reached before the tail dropped below tolerance.
  bool truncation_warning = false;

  cplx at(int n_r, int m) const;
  double norm() const;            // sum |c|^2
  double mean_m() const;          // sum m |c|^2
  double second_moment_m() const; // sum m^2 |c|^2
  double variance_m() const;
  double mean_energy_index() const;  // sum (1 + |m| + 2 n_r) |c|^2
};

struct TruncationPolicy {
  double tail_tol = 1e-12;
  int cap = 1000;
};

FockCoefficients coherent_coeffs(double L_c_abs, int lambda_c, double v, int kmax);

// c_{0, 2k lambda}, k = 0..kmax.
FockCoefficients squeezed_coeffs(double eta, int lambda, double u, int kmax);

// Co-rotating family (lambda == lambda_c); kmax < 0 selects adaptive truncation.
FockCoefficients corotating_coeffs(const MinPacketSpec& spec, int kmax = -1, const TruncationPolicy& policy = {});

// Anti-rotating family (lambda == -lambda_c). Includes every (n_r, m) with
// n_r <= nmax and |m| <= mmax; negative nmax or mmax selects adaptive
// truncation by shells of 2 n_r + |m|.
FockCoefficients antirotating_coeffs(const MinPacketSpec& spec, int nmax = -1, int mmax = -1,
                                     const TruncationPolicy& policy = {});

// Whichever family the spec belongs to, adaptively truncated.
FockCoefficients expand(const MinPacketSpec& spec, const TruncationPolicy& policy = {});

// G(z) = sum_k |c_{0,k}|^2 z^k for co-rotating packets, |z| <= 1.
cplx generating_function(const MinPacketSpec& spec, cplx z);

struct GeneratingDerivatives {
  double G1 = 0.0;  // G'(1)
  double G2 = 0.0;  // G''(1)
  double mean() const { return G1; }
  double sigma_L() const { return G2 + G1 - G1 * G1; }
};

// Analytic derivatives of G at z = 1.
GeneratingDerivatives generating_derivatives(const MinPacketSpec& spec);

// Normalization of the anti-rotating coefficients with x = eta/2, y = |L_c|:
// sum_n (xy)^n H_n(0)^2 / n!^2
//   + sum_{n>=0, m>=1} (xy)^n/(n!(m+n)!) (x^m H_{m+n}(0)^2 + y^m H_n(0)^2)
// = e^y / sqrt(1 - 4x^2), i.e. sum |c|^2 = 1. The m = 0 column is required.
double antirotating_normalization_series(double x, double y, int nmax, int mmax);
// e^y / sqrt(1 - 4x^2)
double antirotating_normalization_closed(double x, double y);

// Smoothed large-momentum approximation of p_k for co-rotating packets at
// w = 0, L_i >> L_c >> 1. Diagnostic only.
double asymptotic_pk(const MinPacketSpec& spec, int k);

}  // namespace gausspack
