#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "wentzell/simd/kernels.hpp"

namespace wentzell::simd {

#ifdef WENTZELL_BUILD_AVX2
const KernelTable& avx2_kernels_impl();
#endif

bool avx2_available() {
#if defined(WENTZELL_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& avx2_kernels() {
#ifdef WENTZELL_BUILD_AVX2
  if (avx2_available()) return avx2_kernels_impl();
#endif
  throw std::runtime_error("AVX2 kernels are not available on this build or CPU");
}

namespace {

const KernelTable* initial_table() {
  const char* env = std::getenv("WENTZELL_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_kernels();
  if (choice == "avx2" || choice == "auto") {
    if (avx2_available()) return &avx2_kernels();
    return &scalar_kernels();
  }
  throw std::invalid_argument("WENTZELL_SIMD must be scalar, avx2 or auto, got '" + choice + "'");
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void set_isa(Isa isa) {
  active().store(isa == Isa::avx2 ? &avx2_kernels() : &scalar_kernels(), std::memory_order_release);
}

Isa active_isa() { return kernels().isa; }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace wentzell::simd
