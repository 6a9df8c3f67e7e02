#pragma once
// Constants and the per-element recipes both kernel variants follow.
// The AVX2 code mirrors these operations one for one.

#include <array>
#include <cstdint>

namespace wentzell::simd::detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline constexpr double kTwoPow52Inv = 1.0 / 4503599627370496.0;
inline constexpr double kTwoPow52 = 4503599627370496.0;

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kPiOver2 = 1.57079632679489661923;

// atanh series: log m = 2 s sum_k s^(2k) / (2k+1), |s| <= 0.1716.
inline constexpr int kLogTerms = 12;
inline constexpr std::array<double, kLogTerms> kLogCoef = {
    1.0,        1.0 / 3.0,  1.0 / 5.0,  1.0 / 7.0,  1.0 / 9.0,  1.0 / 11.0,
    1.0 / 13.0, 1.0 / 15.0, 1.0 / 17.0, 1.0 / 19.0, 1.0 / 21.0, 1.0 / 23.0};

// Taylor coefficients of sin(x)/x and cos(x) in x^2 on [-pi/4, pi/4].
inline constexpr int kSinTerms = 9;
inline constexpr std::array<double, kSinTerms> kSinCoef = {
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0,
    1.0 / 355687428096000.0};
inline constexpr int kCosTerms = 10;
inline constexpr std::array<double, kCosTerms> kCosCoef = {
    1.0,
    -1.0 / 2.0,
    1.0 / 24.0,
    -1.0 / 720.0,
    1.0 / 40320.0,
    -1.0 / 3628800.0,
    1.0 / 479001600.0,
    -1.0 / 87178291200.0,
    1.0 / 20922789888000.0,
    -1.0 / 6402373705728000.0};

// Top 52 bits of a 64-bit word, centred in its cell: values lie in (0,1) and
// never round to either endpoint.
inline std::uint64_t to_u52(std::uint32_t lo, std::uint32_t hi) {
  return ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
}

inline double u52_to_open_unit(std::uint64_t u52) {
  return (static_cast<double>(u52) + 0.5) * kTwoPow52Inv;
}

void philox_block_scalar(const std::uint32_t ctr_in[4], const std::uint32_t key_in[2],
                         std::uint32_t out[4]);

}  // namespace wentzell::simd::detail
