#pragma once

#include <optional>
#include <vector>

#include "gausspack/evolution_context.hpp"
#include "gausspack/minimal_energy.hpp"

// Exact time evolution under the oscillator, magnetic and free Hamiltonians.
namespace gausspack {

// Phase law of the minimal packets: u += 2 lambda omega t, v += lambda_c omega t.
MinPacketSpec evolve_oscillator(const MinPacketSpec& spec, double t);

// Minimal packets of the magnetic system are built with mu = M omega_tilde; the
// returned spec carries omega = omega_tilde, M = ctx.M and phases
// u += 2 (lambda omega_tilde - omega_L) t, v += (lambda_c omega_tilde - omega_L) t.
MinPacketSpec evolve_magnetic(const MinPacketSpec& spec, const EvolutionContext& ctx, double t);

// hbar omega_tilde (1 + |L_i| + |L_c|) - hbar omega_L (L_i + L_c), absolute units.
double magnetic_energy(const MinPacketSpec& spec, const EvolutionContext& ctx);

// Heisenberg flow xi(t) = S xi(0) of the quadratic Hamiltonian, closed form.
Mat4 flow_matrix(const EvolutionContext& ctx, double t);

GaussianState evolve_state(const GaussianState& s, const EvolutionContext& ctx, double t);

// Pure Gaussian packet with the given moments, expressed with scale mu.
RealParams params_from_state(const GaussianState& s, double mu);

// Any packet, any system: moments through the flow, then back to parameters.
RealParams evolve_params(const RealParams& p, const EvolutionContext& ctx, double t);

struct FreeEvolutionRecord {
  double t = 0.0;
  double tau = 0.0;  // 2 t / M
  // Quadratic invariant combinations of the symmetric form; NaN otherwise.
  double D_plus = 0.0, D_minus = 0.0;
  double F_tau = 1.0;  // |det(I + i tau A)|^2, A = mu [[a, b/2], [b/2, c]]
  RealParams params_t;
};

// Free evolution of any packet via A' = A (I + i tau A)^{-1}, J' = (I + i tau A)^{-1} J.
FreeEvolutionRecord evolve_free(const RealParams& p0, double t, double M = 1.0);

// alpha = gamma = alpha0, chi_c = -chi_a = chi0, rho = 0.
struct SymmetricFreeForm {
  double alpha0 = 1.0, beta0 = 0.0, chi0 = 0.0, mu = 1.0;
  double D_plus() const;
  double D_minus() const;
};
std::optional<SymmetricFreeForm> symmetric_form(const RealParams& p0);

// Real-form time dependence of the symmetric packet (homogeneous), tau = 2 t / M.
RealParams free_symmetric_closed_form(const SymmetricFreeForm& s, double tau);
double free_shape_function(const SymmetricFreeForm& s, double tau);

struct ShrinkAnalysis {
  bool shrinks = false;
  double D_plus = 0.0, D_minus = 0.0;
  double tau_min = 0.0;  // NaN when the packet does not shrink
  double F_min = 1.0;
  double tau_0 = 0.0;    // instant of axes parallel to the coordinate axes
  double F_tau0 = 1.0;
  double eps_max = 0.0;
};

// Throws DomainError for packets not in the symmetric form.
ShrinkAnalysis shrink_analysis(const RealParams& p0);

struct FreeAsymptotics {
  double eps_infinity = 0.0;
  double theta_infinity = 0.0;
  // a_pm(tau) ~ a_pm(0) growth_rate tau
  double growth_rate = 0.0;
};

FreeAsymptotics free_asymptotics(const RealParams& p0);

struct TrajectoryPoint {
  double t = 0.0;
  GaussianState state;
  AngularSplit split;
  UniversalInvariants invariants;
  EllipseGeometry ellipse;
};

// Uniform grid of `steps` points on [t0, t1] (a single point if steps == 1).
std::vector<TrajectoryPoint> trajectory(const RealParams& p0, const EvolutionContext& ctx, double t0, double t1,
                                        int steps, int threads = 0);

}  // namespace gausspack
