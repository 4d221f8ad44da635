#pragma once

#include <functional>
#include <vector>

#include "gausspack/packet_core.hpp"

// Phase-space averages over the Wigner function of a Gaussian state, by
// tensor-product Gauss-Hermite quadrature in four dimensions.
namespace gausspack::oracle {

using PhaseSpaceFunction = std::function<double(const Vec4&)>;

struct GaussHermiteRule {
  std::vector<double> nodes;    // physicists' convention, weight exp(-z^2)
  std::vector<double> weights;
};
// Golub-Welsch on the Jacobi matrix.
GaussHermiteRule gauss_hermite(int order);

// Integral of W(xi) f(xi) for the Gaussian Wigner function with the given mean
// and covariance. Exact for polynomials of degree < 2 * order.
double wigner_average(const GaussianState& s, const PhaseSpaceFunction& f, int order = 20);

// Variance of the Weyl-quantized (1/2) xi^T K xi. The Weyl symbol of its
// square is the classical square plus the second-order Moyal term.
double wigner_quadratic_variance(const GaussianState& s, const Mat4& K, int order = 20);

}  // namespace gausspack::oracle
