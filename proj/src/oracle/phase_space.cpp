#include "gausspack/oracle/phase_space.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace gausspack::oracle {

namespace {

Mat4 omega_matrix() {
  Mat4 o = Mat4::Zero();
  o(X, PX) = o(Y, PY) = 1.0;
  o(PX, X) = o(PY, Y) = -1.0;
  return o;
}

}  // namespace

Mat4 hamiltonian_matrix(const EvolutionContext& ctx) {
  ctx.validate();
  const double M = ctx.M;
  Mat4 K = Mat4::Zero();
  K(PX, PX) = K(PY, PY) = 1 / M;
  if (ctx.kind == SystemKind::free_particle) return K;
  if (ctx.kind == SystemKind::oscillator) {
    K(X, X) = K(Y, Y) = M * ctx.omega * ctx.omega;
    return K;
  }
  // (p - eA/c)^2 / 2M with the symmetric gauge, plus the oscillator potential:
  // p^2/2M + M (omega^2 + omega_L^2) r^2 / 2 - omega_L (x py - y px).
  K(X, X) = K(Y, Y) = M * (ctx.omega * ctx.omega + ctx.omega_L * ctx.omega_L);
  K(X, PY) = K(PY, X) = -ctx.omega_L;
  K(Y, PX) = K(PX, Y) = ctx.omega_L;
  return K;
}

Mat4 flow_numeric(const EvolutionContext& ctx, double t) {
  const Mat4 gen = t * omega_matrix() * hamiltonian_matrix(ctx);
  return gen.exp();
}

GaussianState evolve_state_numeric(const GaussianState& s, const EvolutionContext& ctx, double t) {
  const Mat4 S = flow_numeric(ctx, t);
  const Vec4 m = S * s.mean();
  GaussianState r{m(0), m(1), m(2), m(3), S * s.cov * S.transpose()};
  r.cov = 0.5 * (r.cov + r.cov.transpose()).eval();
  return r;
}

double symplectic_defect(const Mat4& S) {
  const Mat4 O = omega_matrix();
  return (S.transpose() * O * S - O).cwiseAbs().maxCoeff();
}

}  // namespace gausspack::oracle
