// AVX2 + FMA variants of the batched kernels. This translation unit is the only
// one compiled with -mavx2 -mfma; it is entered through the dispatch table only
// after a runtime CPU check.
#include <immintrin.h>

#include <array>
#include <cassert>
#include <cmath>
#include <limits>

#include "gausspack/simd/kernels.hpp"

namespace gausspack::simd {
namespace {

constexpr double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// 2^52 + 2^51: adding it to an integral double leaves the integer in the low
// mantissa bits, which lets us reinterpret it as int64 without AVX-512.
constexpr double kMagic = 6755399441055744.0;

inline __m256i to_int64(__m256d integral) {
  const __m256d magic = _mm256_set1_pd(kMagic);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(integral, magic)),
                          _mm256_castpd_si256(magic));
}

// 2^n for integral n in [-1022, 1023].
inline __m256d pow2(__m256d n) {
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023)), 52);
  return _mm256_castsi256_pd(bits);
}

inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
  const __m256d ln2_hi = _mm256_set1_pd(0.6931471805599453);
  const __m256d ln2_lo = _mm256_set1_pd(2.3190468138462996e-17);
  const __m256d hi_limit = _mm256_set1_pd(709.79);
  const __m256d lo_limit = _mm256_set1_pd(-745.2);

  const __m256d xc = _mm256_max_pd(_mm256_min_pd(x, hi_limit), lo_limit);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  // |r| <= ln2/2; Taylor through r^13 leaves a remainder below 1e-17.
  __m256d p = _mm256_set1_pd(1.0 / factorial(13));
  for (int k = 12; k >= 0; --k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / factorial(k)));

  // Split the scale in two factors so that subnormal results and n = 1024 work.
  const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d n2 = _mm256_sub_pd(n, n1);
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2(n1)), pow2(n2));

  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  result = _mm256_blendv_pd(result, inf, _mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ));
  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ));
  return _mm256_blendv_pd(result, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
}

inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d two_over_pi = _mm256_set1_pd(0.6366197723675814);
  const __m256d pio2_hi = _mm256_set1_pd(1.5707963267948966);
  const __m256d pio2_lo = _mm256_set1_pd(6.123233995736766e-17);

  const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(q, pio2_hi, x);
  r = _mm256_fnmadd_pd(q, pio2_lo, r);
  const __m256d z = _mm256_mul_pd(r, r);

  // |r| <= pi/4: sin through r^19 and cos through r^18.
  __m256d ps = _mm256_set1_pd(-1.0 / factorial(19));
  for (int k = 8; k >= 1; --k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(sign / factorial(2 * k + 1)));
  }
  const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(ps, z), r, r);

  __m256d pc = _mm256_set1_pd(-1.0 / factorial(18));
  for (int k = 8; k >= 0; --k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(sign / factorial(2 * k)));
  }
  const __m256d c = pc;

  const __m256i quadrant = _mm256_and_si256(to_int64(q), _mm256_set1_epi64x(3));
  const __m256d q1 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(quadrant, _mm256_set1_epi64x(1)));
  const __m256d q2 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(quadrant, _mm256_set1_epi64x(2)));
  const __m256d q3 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(quadrant, _mm256_set1_epi64x(3)));
  const __m256d neg = _mm256_set1_pd(-0.0);
  const __m256d ns = _mm256_xor_pd(s, neg);
  const __m256d nc = _mm256_xor_pd(c, neg);

  __m256d so = s, co = c;
  so = _mm256_blendv_pd(so, c, q1);
  co = _mm256_blendv_pd(co, ns, q1);
  so = _mm256_blendv_pd(so, ns, q2);
  co = _mm256_blendv_pd(co, nc, q2);
  so = _mm256_blendv_pd(so, nc, q3);
  co = _mm256_blendv_pd(co, s, q3);

  const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  const __m256d inf_mask = _mm256_cmp_pd(_mm256_andnot_pd(neg, x),
                                         _mm256_set1_pd(std::numeric_limits<double>::infinity()), _CMP_EQ_OQ);
  const __m256d bad = _mm256_or_pd(nan_mask, inf_mask);
  const __m256d qnan = _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN());
  s_out = _mm256_blendv_pd(so, qnan, bad);
  c_out = _mm256_blendv_pd(co, qnan, bad);
}

inline __m256d quadratic_pd(const Quadratic& q, __m256d x, __m256d y) {
  // c0 + x (c1 + c3 x + c4 y) + y (c2 + c5 y)
  const __m256d inner_x =
      _mm256_fmadd_pd(_mm256_set1_pd(q.c4), y, _mm256_fmadd_pd(_mm256_set1_pd(q.c3), x, _mm256_set1_pd(q.c1)));
  const __m256d inner_y = _mm256_fmadd_pd(_mm256_set1_pd(q.c5), y, _mm256_set1_pd(q.c2));
  return _mm256_fmadd_pd(y, inner_y, _mm256_fmadd_pd(x, inner_x, _mm256_set1_pd(q.c0)));
}

// Runs `body(offset, count)` over full 4-lane blocks, then once more on a
// zero-padded copy of the tail so the tail takes the same SIMD path.
template <class Body>
void for_blocks(std::size_t n, Body&& body) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) body(i, std::size_t{4});
  if (i < n) body(i, n - i);
}

inline __m256d load_partial(const double* p, std::size_t count) {
  if (count == 4) return _mm256_loadu_pd(p);
  alignas(32) std::array<double, 4> tmp{};
  for (std::size_t k = 0; k < count; ++k) tmp[k] = p[k];
  return _mm256_load_pd(tmp.data());
}

inline void store_partial(double* p, __m256d v, std::size_t count) {
  if (count == 4) {
    _mm256_storeu_pd(p, v);
    return;
  }
  alignas(32) std::array<double, 4> tmp{};
  _mm256_store_pd(tmp.data(), v);
  for (std::size_t k = 0; k < count; ++k) p[k] = tmp[k];
}

void exp_avx2(std::span<const double> in, std::span<double> out) {
  assert(out.size() >= in.size());
  for_blocks(in.size(), [&](std::size_t i, std::size_t cnt) {
    store_partial(out.data() + i, exp_pd(load_partial(in.data() + i, cnt)), cnt);
  });
}

void sincos_avx2(std::span<const double> in, std::span<double> s, std::span<double> c) {
  assert(s.size() >= in.size() && c.size() >= in.size());
  for_blocks(in.size(), [&](std::size_t i, std::size_t cnt) {
    __m256d sv, cv;
    sincos_pd(load_partial(in.data() + i, cnt), sv, cv);
    store_partial(s.data() + i, sv, cnt);
    store_partial(c.data() + i, cv, cnt);
  });
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 8), _mm256_loadu_pd(b.data() + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 12), _mm256_loadu_pd(b.data() + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  const __m256d acc = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  alignas(32) std::array<double, 4> lanes;
  _mm256_store_pd(lanes.data(), acc);
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void gaussian_avx2(const Quadratic& q, std::span<const double> x, std::span<const double> y,
                   std::span<double> out) {
  assert(x.size() == y.size() && out.size() >= x.size());
  for_blocks(x.size(), [&](std::size_t i, std::size_t cnt) {
    const __m256d e = quadratic_pd(q, load_partial(x.data() + i, cnt), load_partial(y.data() + i, cnt));
    store_partial(out.data() + i, exp_pd(e), cnt);
  });
}

void complex_gaussian_avx2(const Quadratic& re, const Quadratic& im, std::span<const double> x,
                           std::span<const double> y, std::span<double> out_re,
                           std::span<double> out_im) {
  assert(x.size() == y.size());
  for_blocks(x.size(), [&](std::size_t i, std::size_t cnt) {
    const __m256d xv = load_partial(x.data() + i, cnt);
    const __m256d yv = load_partial(y.data() + i, cnt);
    const __m256d mag = exp_pd(quadratic_pd(re, xv, yv));
    __m256d s, c;
    sincos_pd(quadratic_pd(im, xv, yv), s, c);
    store_partial(out_re.data() + i, _mm256_mul_pd(mag, c), cnt);
    store_partial(out_im.data() + i, _mm256_mul_pd(mag, s), cnt);
  });
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{Isa::avx2,    exp_avx2,      sincos_avx2, dot_avx2,
                                 gaussian_avx2, complex_gaussian_avx2};
  return table;
}

}  // namespace gausspack::simd
