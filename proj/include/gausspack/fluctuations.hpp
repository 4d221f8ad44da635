#pragma once

#include "gausspack/evolution_context.hpp"
#include "gausspack/minimal_energy.hpp"

// Energy and angular-momentum variances of minimal packets from Gaussian
// fourth-moment factorization. Units: hbar = 1; energies carry their frequency
// (sigma_E is returned in absolute units, e.g. (hbar omega)^2 * number).
namespace gausspack {

// Symmetrized central fourth moment <ABCD>_W = AB CD + AC BD + AD BC for
// labels in {X, Y, PX, PY}.
double wick_fourth_moment(const Mat4& cov, int a, int b, int c, int d);

// Quadratic observable O = (1/2) xi^T K xi, Weyl-ordered, xi = (x, y, p_x, p_y).
double quadratic_mean(const Vec4& mean, const Mat4& cov, const Mat4& K);
double quadratic_variance(const Vec4& mean, const Mat4& cov, const Mat4& K);

// K for L_z = x p_y - y p_x.
Mat4 angular_momentum_form();
// K for the Hamiltonian of the selected context (oscillator or magnetic).
Mat4 hamiltonian_form(const EvolutionContext& ctx);

// sigma_L from the closed form (units hbar^2).
double sigma_L_closed(const MinPacketSpec& spec);
// sigma_L assembled from the moments of build_min_packet(spec) through the
// term-by-term expansion of <L^2> with Wick factorization.
double sigma_L_wick(const MinPacketSpec& spec);
// Closed form, after asserting agreement with sigma_L_wick to 1e-10.
double sigma_L(const MinPacketSpec& spec);

// Oscillator: omega^2 sigma_L. Magnetic: closed form for omega = 0, the
// matrix-Wick variance of H otherwise; in both magnetic cases the packet is
// the minimal packet built with mu = M omega_tilde. Free context rejected.
double sigma_E(const MinPacketSpec& spec, const EvolutionContext& ctx);
// Closed form for the pure magnetic case (omega = 0), units (hbar omega_L)^2.
double sigma_E_magnetic_closed(const MinPacketSpec& spec, double omega_L);

struct VarianceReport {
  double sigma_L = 0.0;
  double sigma_E = 0.0;
  double w = 0.0;
  bool co_rotating = true;
  double L_total = 0.0;
  double energy = 0.0;
};

VarianceReport variance_report(const MinPacketSpec& spec, const EvolutionContext& ctx);

struct SubPoissonOptimum {
  double L_total = 0.0;
  double sigma_min = 0.0;
  double eccentricity = 0.0;
};

SubPoissonOptimum subpoisson_optimum(double L_i);

// Co-rotating sigma_L at w = 0 as a function of L_i with L = L_i + L_c fixed.
double sigma_L_fixed_total(double L_i, double L_total);

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
};
// Golden-section minimization of sigma_L_fixed_total over L_i in (0, L_total).
GoldenResult minimize_sigma_at_fixed_total(double L_total, double xtol = 1e-13);

}  // namespace gausspack
