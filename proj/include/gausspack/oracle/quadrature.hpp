#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gausspack/packet_core.hpp"

// Adaptive tensor-product Gauss-Legendre quadrature over rectangles, for
// vector-valued integrands evaluated in batches.
namespace gausspack::oracle {

struct QuadratureSpec {
  // Box half-size in units of the packet's largest standard deviation.
  double half_width = 8.0;
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  // Cap on the number of panels.
  int max_subdivisions = 20000;

  void validate() const;
};

struct Box {
  double x_lo = -1.0, x_hi = 1.0, y_lo = -1.0, y_hi = 1.0;
};

// Writes component k at point i into out[k * n + i], n = xs.size().
using BatchIntegrand = std::function<void(std::span<const double> xs, std::span<const double> ys,
                                          std::span<double> out)>;

struct QuadratureResult {
  std::vector<double> values;
  std::vector<double> errors;
  int panels = 0;
  int evaluations = 0;
};

class ToleranceNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Each panel is integrated with the 16x16 Gauss-Legendre product rule; the
// error estimate per direction is its difference from the rule with 8 points
// along that direction. The panel with the largest relative error is bisected
// along the dominant direction (or quartered) until every component meets
// max(abs_tol, rel_tol |I_k|, roundoff floor). Panel results are combined by
// pairwise summation in panel-creation order.
QuadratureResult integrate_2d(const BatchIntegrand& f, int components, const Box& box,
                              const QuadratureSpec& spec = {});

// Box centered on the packet, half-width spec.half_width * sigma_max * scale
// (scale = sqrt 2 for integrands that decay like |psi| rather than |psi|^2).
Box packet_box(const RealParams& p, double half_width, double scale = 1.0);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Pairwise (cascade) sum, deterministic for a given input order.
double pairwise_sum(std::span<const double> v);

}  // namespace gausspack::oracle
