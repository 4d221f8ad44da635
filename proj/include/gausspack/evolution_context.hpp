#pragma once

#include <string_view>

namespace gausspack {

enum class SystemKind { oscillator, magnetic, free_particle };

std::string_view system_name(SystemKind kind);

// Hamiltonian selector. Magnetic: H = p^2/2M + M omega_tilde^2 r^2/2 - omega_L L_z
// (circular gauge), omega_tilde^2 = omega^2 + omega_L^2; omega = 0 is the bare
// charged particle.
struct EvolutionContext {
  SystemKind kind = SystemKind::oscillator;
  double omega = 1.0;
  double omega_L = 0.0;
  double M = 1.0;

  double omega_tilde() const;
  double mu_tilde() const { return M * omega_tilde(); }
  // Throws DomainError for inconsistent frequencies or mass.
  void validate() const;

  static EvolutionContext oscillator(double omega, double M = 1.0);
  static EvolutionContext magnetic(double omega_L, double omega = 0.0, double M = 1.0);
  static EvolutionContext free_particle(double M = 1.0);
};

}  // namespace gausspack
