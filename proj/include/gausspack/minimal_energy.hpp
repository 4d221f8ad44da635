#pragma once

#include <cstdint>
#include <vector>

#include "gausspack/packet_core.hpp"

namespace gausspack {

// The degenerate family of minimal-energy packets of the isotropic oscillator
// at fixed intrinsic and center-of-mass angular momentum.
struct MinPacketSpec {
  double L_i_abs = 0.0;
  double L_c_abs = 0.0;
  int lambda = 1;    // sign of L_i
  int lambda_c = 1;  // sign of L_c
  double u = 0.0;    // shape phase
  double v = 0.0;    // orbit phase
  double omega = 1.0;
  double M = 1.0;

  double eta() const;
  double mu() const { return M * omega; }
  double orbit_radius() const;
  double L_i() const { return lambda * L_i_abs; }
  double L_c() const { return lambda_c * L_c_abs; }
  double L_total() const { return L_i() + L_c(); }
  // Relative phase lambda (v - u/2) that controls the fluctuations.
  double w() const;
  bool co_rotating() const { return lambda == lambda_c; }

  // Throws DomainError on negative magnitudes, signs other than +-1, or
  // non-positive omega / M.
  void validate() const;
};

RealParams build_min_packet(const MinPacketSpec& spec);

// hbar omega (1 + |L_i| + |L_c|), returned in units of hbar omega.
double mean_energy(const MinPacketSpec& spec);

// Closed-form covariances and means of the minimal packet.
GaussianState min_packet_covariances(const MinPacketSpec& spec);

// Intrinsic (covariance) part of <H> for the oscillator with mu = M omega, in
// units of hbar omega.
double intrinsic_energy(double alpha, double beta, double gamma, double chi_a, double chi_c, double rho);
double intrinsic_energy(const RealParams& p);

// Center-of-mass part of <H> in units of hbar omega (mu = M omega).
double classical_energy(const RealParams& p);

// Intrinsic energy written as E1(g, eta) + E2(g, eta, xi, beta, z, rho) with
// chi eliminated by the angular-momentum constraint; requires beta != 0.
struct EnergySplit {
  double E1 = 0.0;
  double E2 = 0.0;
};
EnergySplit energy_split(double L_i, double g, double xi, double beta, double z, double rho);

struct Squeezing {
  double S_x = 1.0;
  double S_y = 1.0;
  double closed_form = 1.0;  // 1 / (1 + eta)
  double r_max = 0.0;        // eta
};

// Invariant squeezing coefficient per mode for an oscillator of frequency omega
// and mass M, from the general definition.
double invariant_squeezing(double xx, double pp, double xp, double omega, double M);

Squeezing squeezing(const MinPacketSpec& spec);

struct UniversalInvariants {
  double D0 = 0.0;
  double D2 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

// D0 = det(cov), D2 from the explicit covariance combination, symplectic
// eigenvalues from Sigma^-1 cov. Throws DomainError on a non-symmetric matrix
// and std::logic_error if the eigenvalue identities fail beyond 1e-10.
UniversalInvariants universal_invariants(const GaussianState& state);
UniversalInvariants universal_invariants(const Mat4& cov);

struct MinimumSearchBudget {
  int starts = 24;
  int max_evals_per_start = 100000;
  double ftol = 1e-9;
  std::uint64_t seed = 20240611;
  // Worker threads, 0 = GAUSSPACK_THREADS or hardware concurrency.
  int threads = 0;
};

struct MinimumReport {
  double L_i_abs = 0.0;
  double predicted = 0.0;
  double best = 0.0;
  // (g, xi, beta, z, rho) of the best point.
  std::vector<double> best_point;
  double best_chi_elimination = 0.0;
  double best_rho_elimination = 0.0;
  int starts = 0;
  int evaluations = 0;
  // Largest |E1 + E2 - E_i| seen at the best points of the chi-elimination pass.
  double split_residual = 0.0;
  // Classical sub-check at |L_c| = 1: min of E_c with the constraint, vs |L_c|.
  double classical_best = 0.0;
  double classical_predicted = 1.0;
  bool passed = false;
};

// Brute-force constrained minimization of the intrinsic energy at fixed L_i.
MinimumReport verify_minimum(double L_i_abs, const MinimumSearchBudget& budget = {});

}  // namespace gausspack
