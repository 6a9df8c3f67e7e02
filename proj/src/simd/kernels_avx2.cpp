// AVX2 variants. Each lane performs exactly the scalar operation sequence
// from kernels_scalar.cpp, so outputs match bit for bit.

#include <immintrin.h>

#include <bit>
#include <cmath>

#include "kernel_common.hpp"
#include "wentzell/simd/kernels.hpp"

namespace wentzell::simd {

using namespace detail;

namespace {

inline __m256d u64_small_to_pd(__m256i v) {
  // exact for v < 2^52
  const __m256i magic = _mm256_set1_epi64x(std::bit_cast<std::int64_t>(kTwoPow52));
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic)), _mm256_set1_pd(kTwoPow52));
}

inline __m256d neg(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }

inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i raw = _mm256_and_si256(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x7ff));
  __m256d ed = _mm256_sub_pd(u64_small_to_pd(raw), _mm256_set1_pd(1023.0));
  const __m256i mant = _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                                       _mm256_set1_epi64x(0x3ff0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant);
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  ed = _mm256_blendv_pd(ed, _mm256_add_pd(ed, _mm256_set1_pd(1.0)), big);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d t = _mm256_set1_pd(kLogCoef[kLogTerms - 1]);
  for (int k = kLogTerms - 2; k >= 0; --k)
    t = _mm256_add_pd(_mm256_mul_pd(t, z), _mm256_set1_pd(kLogCoef[k]));
  const __m256d tail = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), t),
                                     _mm256_mul_pd(ed, _mm256_set1_pd(kLn2Lo)));
  return _mm256_add_pd(_mm256_mul_pd(ed, _mm256_set1_pd(kLn2Hi)), tail);
}

inline void sincos_2pi_pd(__m256d u, __m256d* sin_out, __m256d* cos_out) {
  const __m256d v = _mm256_mul_pd(_mm256_set1_pd(4.0), u);
  __m256d q = _mm256_round_pd(v, _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(v, q);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d up = _mm256_cmp_pd(r, _mm256_set1_pd(0.5), _CMP_GE_OQ);
  r = _mm256_blendv_pd(r, _mm256_sub_pd(r, one), up);
  q = _mm256_blendv_pd(q, _mm256_add_pd(q, one), up);
  const __m256d wrap = _mm256_cmp_pd(q, _mm256_set1_pd(4.0), _CMP_GE_OQ);
  q = _mm256_blendv_pd(q, _mm256_sub_pd(q, _mm256_set1_pd(4.0)), wrap);
  const __m256d x = _mm256_mul_pd(r, _mm256_set1_pd(kPiOver2));
  const __m256d z = _mm256_mul_pd(x, x);
  __m256d ps = _mm256_set1_pd(kSinCoef[kSinTerms - 1]);
  for (int k = kSinTerms - 2; k >= 0; --k)
    ps = _mm256_add_pd(_mm256_mul_pd(ps, z), _mm256_set1_pd(kSinCoef[k]));
  __m256d pc = _mm256_set1_pd(kCosCoef[kCosTerms - 1]);
  for (int k = kCosTerms - 2; k >= 0; --k)
    pc = _mm256_add_pd(_mm256_mul_pd(pc, z), _mm256_set1_pd(kCosCoef[k]));
  const __m256d s0 = _mm256_mul_pd(x, ps);
  const __m256d c0 = pc;
  const __m256d q0 = _mm256_cmp_pd(q, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d q1 = _mm256_cmp_pd(q, one, _CMP_EQ_OQ);
  const __m256d q2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  __m256d s = neg(c0);
  s = _mm256_blendv_pd(s, neg(s0), q2);
  s = _mm256_blendv_pd(s, c0, q1);
  s = _mm256_blendv_pd(s, s0, q0);
  __m256d c = s0;
  c = _mm256_blendv_pd(c, neg(c0), q2);
  c = _mm256_blendv_pd(c, neg(s0), q1);
  c = _mm256_blendv_pd(c, c0, q0);
  *sin_out = s;
  *cos_out = c;
}

void philox_uniforms_avx2(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block,
                          std::size_t n_blocks, double* out) {
  const __m256i mask32 = _mm256_set1_epi64x(0xffffffffLL);
  const __m256i m0 = _mm256_set1_epi64x(kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(kPhiloxM1);
  const __m256i w0 = _mm256_set1_epi64x(kPhiloxW0);
  const __m256i w1 = _mm256_set1_epi64x(kPhiloxW1);
  const __m256i key0 = _mm256_set1_epi64x(static_cast<std::uint32_t>(key));
  const __m256i key1 = _mm256_set1_epi64x(static_cast<std::uint32_t>(key >> 32));
  const __m256i s0 = _mm256_set1_epi64x(static_cast<std::uint32_t>(stream));
  const __m256i s1 = _mm256_set1_epi64x(static_cast<std::uint32_t>(stream >> 32));
  const __m256i magic = _mm256_set1_epi64x(std::bit_cast<std::int64_t>(kTwoPow52));
  const __m256d two52 = _mm256_set1_pd(kTwoPow52);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d scale = _mm256_set1_pd(kTwoPow52Inv);

  std::size_t i = 0;
  for (; i + 4 <= n_blocks; i += 4) {
    const std::uint64_t b = first_block + i;
    const __m256i bv = _mm256_set_epi64x(static_cast<std::int64_t>(b + 3), static_cast<std::int64_t>(b + 2),
                                         static_cast<std::int64_t>(b + 1), static_cast<std::int64_t>(b));
    __m256i c0 = _mm256_and_si256(bv, mask32);
    __m256i c1 = _mm256_srli_epi64(bv, 32);
    __m256i c2 = s0;
    __m256i c3 = s1;
    __m256i k0 = key0;
    __m256i k1 = key1;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 = _mm256_and_si256(_mm256_add_epi32(k0, w0), mask32);
        k1 = _mm256_and_si256(_mm256_add_epi32(k1, w1), mask32);
      }
      const __m256i p0 = _mm256_mul_epu32(c0, m0);
      const __m256i p1 = _mm256_mul_epu32(c2, m1);
      const __m256i hi0 = _mm256_srli_epi64(p0, 32);
      const __m256i lo0 = _mm256_and_si256(p0, mask32);
      const __m256i hi1 = _mm256_srli_epi64(p1, 32);
      const __m256i lo1 = _mm256_and_si256(p1, mask32);
      c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
      c1 = lo1;
      c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
      c3 = lo0;
    }
    const __m256i a52 = _mm256_srli_epi64(_mm256_or_si256(_mm256_slli_epi64(c1, 32), c0), 12);
    const __m256i b52 = _mm256_srli_epi64(_mm256_or_si256(_mm256_slli_epi64(c3, 32), c2), 12);
    const __m256d ua = _mm256_mul_pd(
        _mm256_add_pd(_mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(a52, magic)), two52), half), scale);
    const __m256d ub = _mm256_mul_pd(
        _mm256_add_pd(_mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(b52, magic)), two52), half), scale);
    const __m256d lo = _mm256_unpacklo_pd(ua, ub);
    const __m256d hi = _mm256_unpackhi_pd(ua, ub);
    _mm256_storeu_pd(out + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(out + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  if (i < n_blocks) scalar_kernels().philox_uniforms(key, stream, first_block + i, n_blocks - i, out + 2 * i);
}

void box_muller_avx2(const double* u, std::size_t n_pairs, double scale, double* out) {
  const __m256d sc = _mm256_set1_pd(scale);
  const __m256d m2 = _mm256_set1_pd(-2.0);
  std::size_t i = 0;
  for (; i + 4 <= n_pairs; i += 4) {
    const __m256d a = _mm256_loadu_pd(u + 2 * i);
    const __m256d b = _mm256_loadu_pd(u + 2 * i + 4);
    const __m256d u1 = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0xD8);
    const __m256d u2 = _mm256_permute4x64_pd(_mm256_unpackhi_pd(a, b), 0xD8);
    const __m256d rad = _mm256_sqrt_pd(_mm256_mul_pd(m2, log_pd(u1)));
    __m256d s, c;
    sincos_2pi_pd(u2, &s, &c);
    const __m256d x = _mm256_mul_pd(sc, _mm256_mul_pd(rad, c));
    const __m256d y = _mm256_mul_pd(sc, _mm256_mul_pd(rad, s));
    const __m256d lo = _mm256_unpacklo_pd(x, y);
    const __m256d hi = _mm256_unpackhi_pd(x, y);
    _mm256_storeu_pd(out + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(out + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  if (i < n_pairs) scalar_kernels().box_muller(u + 2 * i, n_pairs - i, scale, out + 2 * i);
}

void bridge_minima_avx2(const double* d, const double* u, std::size_t n, double var_step,
                        double* out) {
  const double tv_s = 2.0 * var_step;
  const __m256d tv = _mm256_set1_pd(tv_s);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dv = _mm256_loadu_pd(d + i);
    const __m256d lu = log_pd(_mm256_loadu_pd(u + i));
    const __m256d disc = _mm256_sub_pd(_mm256_mul_pd(dv, dv), _mm256_mul_pd(tv, lu));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(half, _mm256_sub_pd(dv, _mm256_sqrt_pd(disc))));
  }
  if (i < n) scalar_kernels().bridge_minima(d + i, u + i, n - i, var_step, out + i);
}

void log_avx2(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, log_pd(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = ref_log(x[i]);
}

double finish_lanes(__m256d acc, const double* tail, std::size_t n_tail, double shift, bool squared) {
  alignas(32) double a[4];
  _mm256_store_pd(a, acc);
  for (std::size_t j = 0; j < n_tail; ++j) {
    if (squared) {
      const double dd = tail[j] - shift;
      a[j] += dd * dd;
    } else {
      a[j] += tail[j];
    }
  }
  return (a[0] + a[1]) + (a[2] + a[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t nb = n / 4;
  for (std::size_t i = 0; i < nb; ++i) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + 4 * i));
  return finish_lanes(acc, x + 4 * nb, n - 4 * nb, 0.0, false);
}

double sum_sq_dev_avx2(const double* x, std::size_t n, double shift) {
  __m256d acc = _mm256_setzero_pd();
  const __m256d sh = _mm256_set1_pd(shift);
  const std::size_t nb = n / 4;
  for (std::size_t i = 0; i < nb; ++i) {
    const __m256d dd = _mm256_sub_pd(_mm256_loadu_pd(x + 4 * i), sh);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(dd, dd));
  }
  return finish_lanes(acc, x + 4 * nb, n - 4 * nb, shift, true);
}

std::size_t count_greater_avx2(const double* x, std::size_t n, double threshold) {
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), t, _CMP_GT_OQ));
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(mask)));
  }
  for (; i < n; ++i) count += x[i] > threshold ? 1 : 0;
  return count;
}

}  // namespace

const KernelTable& avx2_kernels_impl() {
  static const KernelTable table{Isa::avx2,       philox_uniforms_avx2, box_muller_avx2,
                                 bridge_minima_avx2, log_avx2,          sum_avx2,
                                 sum_sq_dev_avx2, count_greater_avx2};
  return table;
}

}  // namespace wentzell::simd
