#pragma once

#include "gausspack/evolution_context.hpp"
#include "gausspack/packet_core.hpp"

// Linear phase-space flow of quadratic Hamiltonians from a matrix exponential.
namespace gausspack::oracle {

// Symmetric K with H = (1/2) xi^T K xi over xi = (x, y, px, py), assembled
// from the Hamiltonian's terms.
Mat4 hamiltonian_matrix(const EvolutionContext& ctx);

// S = exp(t Omega K), the Heisenberg flow xi(t) = S xi(0).
Mat4 flow_numeric(const EvolutionContext& ctx, double t);

GaussianState evolve_state_numeric(const GaussianState& s, const EvolutionContext& ctx, double t);

// max |S^T Omega S - Omega|.
double symplectic_defect(const Mat4& S);

}  // namespace gausspack::oracle
