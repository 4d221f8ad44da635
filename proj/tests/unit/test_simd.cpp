#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gausspack/simd/kernels.hpp"

using namespace gausspack::simd;

namespace {

// Lengths straddle the 4-wide vector body and its scalar tail.
const int kLengths[] = {0, 1, 3, 4, 5, 7, 8, 17, 256, 1031};

std::vector<double> uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = U(rng);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("scalar kernels against libm") {
  const KernelTable& k = scalar_kernels();
  std::mt19937_64 rng(7);
  const auto in = uniform(rng, 100, -700, 700);
  std::vector<double> out(in.size()), s(in.size()), c(in.size());
  k.exp(in, out);
  for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == std::exp(in[i]));
  k.sincos(in, s, c);
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(s[i] == std::sin(in[i]));
    CHECK(c[i] == std::cos(in[i]));
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const KernelTable* v = avx2_kernels();
  if (!v) {
    MESSAGE("AVX2 variant unavailable on this machine");
    return;
  }
  CHECK(v->isa == Isa::avx2);
  const KernelTable& s = scalar_kernels();
  std::mt19937_64 rng(11);

  for (int n : kLengths) {
    CAPTURE(n);
    const auto in = uniform(rng, n, -745, 709);
    std::vector<double> a(in.size()), b(in.size());
    s.exp(in, a);
    v->exp(in, b);
    for (int i = 0; i < n; ++i) CHECK(rel(a[i], b[i]) < 4e-16);

    const auto ang = uniform(rng, n, -200, 200);
    std::vector<double> s1(ang.size()), c1(ang.size()), s2(ang.size()), c2(ang.size());
    s.sincos(ang, s1, c1);
    v->sincos(ang, s2, c2);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(s1[i] - s2[i]) < 1e-15);
      CHECK(std::abs(c1[i] - c2[i]) < 1e-15);
    }

    const auto x = uniform(rng, n, -1, 1), y = uniform(rng, n, -1, 1);
    const double d1 = s.dot(x, y), d2 = v->dot(x, y);
    CHECK(std::abs(d1 - d2) <= 1e-15 * (1 + n));

    const Quadratic re{0.3, 0.1, -0.2, -1.5, 0.4, -0.9}, im{0.0, 2.0, -1.0, 3.0, -0.5, 1.2};
    std::vector<double> g1(x.size()), g2(x.size()), r1(x.size()), i1(x.size()), r2(x.size()), i2(x.size());
    s.gaussian(re, x, y, g1);
    v->gaussian(re, x, y, g2);
    s.complex_gaussian(re, im, x, y, r1, i1);
    v->complex_gaussian(re, im, x, y, r2, i2);
    for (int i = 0; i < n; ++i) {
      CHECK(rel(g1[i], g2[i]) < 1e-15);
      CHECK(std::abs(r1[i] - r2[i]) < 1e-15);
      CHECK(std::abs(i1[i] - i2[i]) < 1e-15);
    }
  }
}

TEST_CASE("exp kernel edge values") {
  for (const KernelTable* k : {&scalar_kernels(), avx2_kernels()}) {
    if (!k) continue;
    CAPTURE(isa_name(k->isa));
    const std::vector<double> in = {0.0, -0.0, 1.0, -1.0, -800.0, 710.0, -745.2};
    std::vector<double> out(in.size());
    k->exp(in, out);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 1.0);
    CHECK(rel(out[2], std::exp(1.0)) < 4e-16);
    CHECK(rel(out[3], std::exp(-1.0)) < 4e-16);
    CHECK(out[4] == 0.0);
    CHECK(std::isinf(out[5]));
    CHECK(out[6] >= 0.0);
  }
}

TEST_CASE("active table is one of the two variants") {
  const KernelTable& a = active_kernels();
  if (a.isa == Isa::avx2) CHECK(cpu_supports_avx2_fma());
  CHECK(&active_kernels() == &a);
}
