#pragma once

#include <span>
#include <vector>

#include "gausspack/fock_expansion.hpp"
#include "gausspack/oracle/quadrature.hpp"

namespace gausspack::oracle {

// Laguerre-Gauss mode built on std::assoc_laguerre, independent of the
// library's own special functions.
cplx lg_mode_reference(const LGMode& mode, double x, double y);

// <mode|psi> by quadrature, with psi renormalized by its own quadrature norm.
std::vector<cplx> overlaps(const RealParams& p, std::span<const LGMode> modes, const QuadratureSpec& spec = {});
cplx overlap(const RealParams& p, const LGMode& mode, const QuadratureSpec& spec = {});

}  // namespace gausspack::oracle
