#include "gausspack/oracle/wigner.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace gausspack::oracle {

GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw DomainError("Gauss-Hermite order must be positive");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermiteRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int k = 0; k < order; ++k) {
    r.nodes[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    r.weights[k] = std::sqrt(std::numbers::pi) * v * v;
  }
  return r;
}

double wigner_average(const GaussianState& s, const PhaseSpaceFunction& f, int order) {
  const Eigen::LLT<Mat4> llt(s.cov);
  if (llt.info() != Eigen::Success) throw DomainError("covariance is not positive definite");
  const Mat4 L = llt.matrixL();
  const GaussHermiteRule gh = gauss_hermite(order);
  const Vec4 m = s.mean();
  const double norm = std::pow(std::numbers::pi, -2.0);
  double total = 0.0;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < order; ++k) {
        double inner = 0.0;
        for (int l = 0; l < order; ++l) {
          const Vec4 z(gh.nodes[i], gh.nodes[j], gh.nodes[k], gh.nodes[l]);
          inner += gh.weights[l] * f(m + std::numbers::sqrt2 * (L * z));
        }
        total += gh.weights[i] * gh.weights[j] * gh.weights[k] * inner;
      }
  return norm * total;
}

double wigner_quadratic_variance(const GaussianState& s, const Mat4& K, int order) {
  // A * A = A^2 - (1/8) Omega_ab Omega_cd K_ac K_bd = A^2 + (1/8) tr((K Omega)^2).
  Mat4 O = Mat4::Zero();
  O(0, 2) = O(1, 3) = 1.0;
  O(2, 0) = O(3, 1) = -1.0;
  const double moyal = 0.125 * (K * O * K * O).trace();
  const double mean = wigner_average(s, [&](const Vec4& v) { return 0.5 * v.dot(K * v); }, order);
  const double second = wigner_average(
      s, [&](const Vec4& v) {
        const double a = 0.5 * v.dot(K * v);
        return a * a;
      },
      order);
  return second + moyal - mean * mean;
}

}  // namespace gausspack::oracle
