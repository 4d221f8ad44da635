#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>

// Two-dimensional Gaussian packets
//
//   psi(x, y) = N exp[-mu (a x^2 + b x y + c y^2) + F x + G y]
//
// with a = alpha/2 + i chi_a, b = beta + i rho, c = gamma/2 + i chi_c,
// F = F1 + i F2, G = G1 + i G2. Units: hbar = 1; the mass only enters through
// the probability current and the Hamiltonians, so it is passed explicitly.
namespace gausspack {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

// Thrown for inputs outside the mathematical domain of an operation
// (non-normalizable packet, wrong rotation class, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Phase-space ordering used by every 4-vector and 4x4 matrix in the library.
enum Axis : int { X = 0, Y = 1, PX = 2, PY = 3 };

struct RealParams {
  double mu = 1.0;
  double alpha = 1.0, beta = 0.0, gamma = 1.0;
  double chi_a = 0.0, chi_c = 0.0, rho = 0.0;
  double F1 = 0.0, F2 = 0.0, G1 = 0.0, G2 = 0.0;

  double delta() const { return alpha * gamma - beta * beta; }
};

// Paired complex coefficients of the exponent.
struct ComplexView {
  double mu;
  cplx a, b, c, F, G;
};

ComplexView complex_view(const RealParams& p);
RealParams from_complex(const ComplexView& cv);

// Throws DomainError("non-normalizable packet") unless mu, alpha, gamma > 0 and
// Delta > 1e-12 max(alpha gamma, 1).
void validate(const RealParams& p);
bool is_valid(const RealParams& p);

struct FirstMoments {
  double x0 = 0.0, y0 = 0.0, px0 = 0.0, py0 = 0.0;

  Vec4 vec() const { return {x0, y0, px0, py0}; }
};

struct GaussianState {
  double x0 = 0.0, y0 = 0.0, px0 = 0.0, py0 = 0.0;
  Mat4 cov = Mat4::Identity() * 0.5;

  Vec4 mean() const { return {x0, y0, px0, py0}; }
};

struct AngularSplit {
  double L_c = 0.0;
  double L_i = 0.0;
  double L_total = 0.0;
};

struct EllipseGeometry {
  double nu = 1.0;
  double a_plus = 0.0, a_minus = 0.0;
  double eccentricity = 0.0;
  double area = 0.0;
  // Angle of the major axis with the x axis, in (-pi/2, pi/2].
  double theta = 0.0;
  // sqrt((alpha - gamma)^2 + 4 beta^2)
  double disc_R = 0.0;
};

// |N|^2 = mu sqrt(Delta) / pi
double normalize(const RealParams& p);

// log of the real positive prefactor N that normalizes psi as written above.
double log_prefactor(const RealParams& p);

cplx psi(const RealParams& p, double x, double y);
double density(const RealParams& p, double x, double y);

FirstMoments first_moments(const RealParams& p);

// Symmetrized covariances over (x, y, p_x, p_y).
Mat4 covariances(const RealParams& p);

GaussianState gaussian_state(const RealParams& p);

AngularSplit angular_split(const RealParams& p);
// Same split from moments: L_c = x0 py0 - y0 px0, L_i = cov(x,p_y) - cov(y,p_x).
AngularSplit angular_split(const GaussianState& s);

// (j_x, j_y) at (x, y) for a particle of mass M.
std::array<double, 2> probability_current(const RealParams& p, double x, double y, double M = 1.0);

EllipseGeometry ellipse(const RealParams& p, double nu = 1.0);

// Packet rigidly rotated by angle phi about the origin: psi'(r) = psi(R(-phi) r).
RealParams rotated(const RealParams& p, double phi);

// Packet moved so that its moments become (x0, y0, px0, py0), shape unchanged.
RealParams with_center(const RealParams& p, const FirstMoments& m);

}  // namespace gausspack
