#pragma once

#include <span>
#include <string_view>

// Batched arithmetic kernels used by the quadrature oracle. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2+FMA variant that is
// selected at runtime when the CPU supports it. The two variants are tested for
// equivalence (tests/unit/test_simd.cpp).
namespace gausspack::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// q(x, y) = c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2
struct Quadratic {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;

  double operator()(double x, double y) const {
    return c0 + x * (c1 + c3 * x + c4 * y) + y * (c2 + c5 * y);
  }
};

struct KernelTable {
  Isa isa;
  // out[i] = exp(in[i])
  void (*exp)(std::span<const double> in, std::span<double> out);
  // sin_out[i] = sin(in[i]), cos_out[i] = cos(in[i])
  void (*sincos)(std::span<const double> in, std::span<double> sin_out,
                 std::span<double> cos_out);
  double (*dot)(std::span<const double> a, std::span<const double> b);
  // out[i] = exp(q(x[i], y[i]))
  void (*gaussian)(const Quadratic& q, std::span<const double> x,
                   std::span<const double> y, std::span<double> out);
  // out[i] = exp(re(x, y) + i im(x, y)), split into real and imaginary parts
  void (*complex_gaussian)(const Quadratic& re, const Quadratic& im,
                           std::span<const double> x, std::span<const double> y,
                           std::span<double> out_re, std::span<double> out_im);
};

const KernelTable& scalar_kernels();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2_fma();

// The table used by the library. Chosen once: AVX2 when available, unless the
// environment variable GAUSSPACK_SIMD=scalar forces the reference path.
const KernelTable& active_kernels();

}  // namespace gausspack::simd
