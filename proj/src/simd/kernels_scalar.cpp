#include <bit>
#include <cmath>

#include "kernel_common.hpp"
#include "wentzell/simd/kernels.hpp"

namespace wentzell::simd {

namespace detail {

void philox_block_scalar(const std::uint32_t ctr_in[4], const std::uint32_t key_in[2],
                         std::uint32_t out[4]) {
  std::uint32_t c0 = ctr_in[0], c1 = ctr_in[1], c2 = ctr_in[2], c3 = ctr_in[3];
  std::uint32_t k0 = key_in[0], k1 = key_in[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c2;
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
  }
  out[0] = c0;
  out[1] = c1;
  out[2] = c2;
  out[3] = c3;
}

}  // namespace detail

using namespace detail;

double ref_log(double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  auto e = static_cast<std::int64_t>((bits >> 52) & 0x7ff) - 1023;
  double m = std::bit_cast<double>((bits & 0x000fffffffffffffULL) | 0x3ff0000000000000ULL);
  if (m > kSqrt2) {
    m = m * 0.5;
    e += 1;
  }
  const double s = (m - 1.0) / (m + 1.0);
  const double z = s * s;
  double t = kLogCoef[kLogTerms - 1];
  for (int k = kLogTerms - 2; k >= 0; --k) t = t * z + kLogCoef[k];
  const double ed = static_cast<double>(e);
  return ed * kLn2Hi + ((2.0 * s) * t + ed * kLn2Lo);
}

void ref_sincos_2pi(double u, double* s, double* c) {
  const double v = 4.0 * u;
  double q = std::floor(v);
  double r = v - q;
  if (r >= 0.5) {
    r = r - 1.0;
    q = q + 1.0;
  }
  if (q >= 4.0) q = q - 4.0;
  const double x = r * kPiOver2;
  const double z = x * x;
  double ps = kSinCoef[kSinTerms - 1];
  for (int k = kSinTerms - 2; k >= 0; --k) ps = ps * z + kSinCoef[k];
  double pc = kCosCoef[kCosTerms - 1];
  for (int k = kCosTerms - 2; k >= 0; --k) pc = pc * z + kCosCoef[k];
  const double s0 = x * ps;
  const double c0 = pc;
  if (q == 0.0) {
    *s = s0;
    *c = c0;
  } else if (q == 1.0) {
    *s = c0;
    *c = -s0;
  } else if (q == 2.0) {
    *s = -s0;
    *c = -c0;
  } else {
    *s = -c0;
    *c = s0;
  }
}

namespace {

void philox_uniforms_scalar(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block,
                            std::size_t n_blocks, double* out) {
  const std::uint32_t k[2] = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  for (std::size_t i = 0; i < n_blocks; ++i) {
    const std::uint64_t b = first_block + i;
    const std::uint32_t ctr[4] = {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                                  static_cast<std::uint32_t>(stream),
                                  static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t w[4];
    philox_block_scalar(ctr, k, w);
    out[2 * i] = u52_to_open_unit(to_u52(w[0], w[1]));
    out[2 * i + 1] = u52_to_open_unit(to_u52(w[2], w[3]));
  }
}

void box_muller_scalar(const double* u, std::size_t n_pairs, double scale, double* out) {
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const double rad = std::sqrt(-2.0 * ref_log(u[2 * i]));
    double s, c;
    ref_sincos_2pi(u[2 * i + 1], &s, &c);
    out[2 * i] = scale * (rad * c);
    out[2 * i + 1] = scale * (rad * s);
  }
}

void bridge_minima_scalar(const double* d, const double* u, std::size_t n, double var_step,
                          double* out) {
  const double tv = 2.0 * var_step;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 0.5 * (d[i] - std::sqrt(d[i] * d[i] - tv * ref_log(u[i])));
  }
}

void log_scalar(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = ref_log(x[i]);
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t nb = n / 4;
  for (std::size_t i = 0; i < nb; ++i)
    for (int j = 0; j < 4; ++j) acc[j] += x[4 * i + j];
  for (std::size_t j = 4 * nb; j < n; ++j) acc[j - 4 * nb] += x[j];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double shift) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t nb = n / 4;
  for (std::size_t i = 0; i < nb; ++i)
    for (int j = 0; j < 4; ++j) {
      const double d = x[4 * i + j] - shift;
      acc[j] += d * d;
    }
  for (std::size_t j = 4 * nb; j < n; ++j) {
    const double d = x[j] - shift;
    acc[j - 4 * nb] += d * d;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

std::size_t count_greater_scalar(const double* x, std::size_t n, double threshold) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += x[i] > threshold ? 1 : 0;
  return count;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,       philox_uniforms_scalar, box_muller_scalar,
                                 bridge_minima_scalar, log_scalar,          sum_scalar,
                                 sum_sq_dev_scalar, count_greater_scalar};
  return table;
}

}  // namespace wentzell::simd
