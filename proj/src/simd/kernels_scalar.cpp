#include <cassert>
#include <cmath>

#include "gausspack/simd/kernels.hpp"

namespace gausspack::simd {
namespace {

void exp_scalar(std::span<const double> in, std::span<double> out) {
  assert(out.size() >= in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::exp(in[i]);
}

void sincos_scalar(std::span<const double> in, std::span<double> s, std::span<double> c) {
  assert(s.size() >= in.size() && c.size() >= in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    s[i] = std::sin(in[i]);
    c[i] = std::cos(in[i]);
  }
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void gaussian_scalar(const Quadratic& q, std::span<const double> x, std::span<const double> y,
                     std::span<double> out) {
  assert(x.size() == y.size() && out.size() >= x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::exp(q(x[i], y[i]));
}

void complex_gaussian_scalar(const Quadratic& re, const Quadratic& im, std::span<const double> x,
                             std::span<const double> y, std::span<double> out_re,
                             std::span<double> out_im) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mag = std::exp(re(x[i], y[i]));
    const double ph = im(x[i], y[i]);
    out_re[i] = mag * std::cos(ph);
    out_im[i] = mag * std::sin(ph);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,    exp_scalar,      sincos_scalar, dot_scalar,
                                 gaussian_scalar, complex_gaussian_scalar};
  return table;
}

}  // namespace gausspack::simd
