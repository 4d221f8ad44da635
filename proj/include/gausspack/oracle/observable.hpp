#pragma once

#include <vector>

#include "gausspack/oracle/quadrature.hpp"

// Expectation values of polynomial observables by quadrature.
namespace gausspack::oracle {

// coeff x^a y^b (-i d/dx)^c (-i d/dy)^d, positions to the left.
struct Monomial {
  cplx coeff = 1.0;
  int a = 0, b = 0, c = 0, d = 0;
};

struct Observable {
  std::vector<Monomial> terms;
  bool hermitian = true;

  static Observable identity();
  static Observable of(Axis axis);                 // x, y, px or py
  static Observable product(Axis first, Axis second);  // first * second as written
  static Observable symmetric_product(Axis first, Axis second);
  static Observable angular_momentum();            // x py - y px
  static Observable angular_momentum_squared();
  Observable operator*(const Observable& rhs) const;
  Observable operator+(const Observable& rhs) const;
  Observable scaled(cplx s) const;
  int degree() const;
};

constexpr int kMaxObservableDegree = 4;

// Raw moments of |psi|^2 up to total degree 2 * kMaxObservableDegree, computed
// once per packet by a single vector-valued quadrature. The packet is used in
// unnormalized form; the zeroth moment provides the normalization.
class MomentOracle {
 public:
  explicit MomentOracle(const RealParams& p, const QuadratureSpec& spec = {});

  cplx expectation_complex(const Observable& obs) const;
  // Real part; throws ToleranceNotMet when a Hermitian observable leaves an
  // imaginary residue above what the quadrature error can explain.
  double expectation(const Observable& obs) const;

  FirstMoments first_moments() const;
  // Symmetrized covariances over (x, y, px, py).
  GaussianState state() const;

  const QuadratureResult& raw() const { return raw_; }

 private:
  // Value and a bound on its quadrature error.
  cplx evaluate(const Observable& obs, double& error_bound) const;

  RealParams p_;
  QuadratureSpec spec_;
  double xc_ = 0.0, yc_ = 0.0;
  QuadratureResult raw_;
};

double expectation(const RealParams& p, const Observable& obs, const QuadratureSpec& spec = {});

// Integral of |psi|^2 with the library's normalization constant.
double quadrature_norm(const RealParams& p, const QuadratureSpec& spec = {});

}  // namespace gausspack::oracle
