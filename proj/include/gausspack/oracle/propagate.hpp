#pragma once

#include <vector>

#include "gausspack/evolution_context.hpp"
#include "gausspack/oracle/quadrature.hpp"

// Direct integration of the exact propagators against an initial packet,
// followed by a Gaussian fit of the sampled wavefunction.
namespace gausspack::oracle {

struct PropagationResult {
  // 9 x 9 grid, row-major in y, covering +-2 standard deviations about the
  // mean predicted by the phase-space flow.
  std::vector<double> xs, ys;
  std::vector<cplx> values;
  RealParams fitted;
  // RMS misfit of log psi over the grid.
  double residual = 0.0;
  bool gaussian = false;
  int panels = 0;
};

constexpr int kPropagationGrid = 9;

// Kernel <r|exp(-i H t)|r'> of the selected system (hbar = 1). Throws
// DomainError where the oscillatory kernels are singular (sin(omega t) = 0).
cplx propagator(const EvolutionContext& ctx, double t, double x, double y, double xp, double yp);

// Throws DomainError at singular times; the fitted parameters use mu of the
// initial packet.
PropagationResult propagate_numeric(const RealParams& p0, const EvolutionContext& ctx, double t,
                                    const QuadratureSpec& spec = {}, double fit_tolerance = 1e-6);

// Log-linear least-squares Gaussian fit to samples; phases are unwrapped
// sequentially from the grid center after removing `phase_guess`.
struct GaussianFit {
  RealParams params;
  double residual = 0.0;
};
GaussianFit fit_gaussian(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<cplx>& values,
                         int nx, int ny, double mu, const std::vector<double>& phase_guess);

}  // namespace gausspack::oracle
