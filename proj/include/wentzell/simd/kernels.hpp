#pragma once
// Batch kernels used by the Monte Carlo engine. Every ISA variant produces
// output that is bit-identical to the scalar reference, so results never
// depend on the machine that ran them.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace wentzell::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // 2*n_blocks uniforms in (0,1) from Philox4x32-10 blocks
  // [first_block, first_block + n_blocks) of the given stream.
  void (*philox_uniforms)(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block,
                          std::size_t n_blocks, double* out);
  // Box-Muller on consecutive pairs (u[2i], u[2i+1]); n_pairs pairs in, 2*n_pairs normals out,
  // each multiplied by scale.
  void (*box_muller)(const double* u, std::size_t n_pairs, double scale, double* out);
  // Minimum of a Brownian bridge from 0 to d[i] over a step with
  // variance var_step: (d - sqrt(d^2 - 2 var_step log u)) / 2.
  void (*bridge_minima)(const double* d, const double* u, std::size_t n, double var_step,
                        double* out);
  void (*log)(const double* x, std::size_t n, double* out);
  // Fixed-order four-lane summation of x and of (x - shift)^2.
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double shift);
  std::size_t (*count_greater)(const double* x, std::size_t n, double threshold);
};

const KernelTable& scalar_kernels();
bool avx2_available();
// Throws std::runtime_error if the AVX2 variant was not built or the CPU lacks AVX2.
const KernelTable& avx2_kernels();

// Active table. Chosen once from the CPU and the WENTZELL_SIMD environment
// variable ("scalar", "avx2" or "auto"); set_isa overrides it.
const KernelTable& kernels();
void set_isa(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

// Scalar reference elementary functions shared by all variants.
double ref_log(double x);
void ref_sincos_2pi(double u, double* s, double* c);

}  // namespace wentzell::simd
