#include "wentzell/rng.hpp"

#include "wentzell/simd/kernels.hpp"

namespace wentzell {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return splitmix64(master ^ fnv1a64(label));
}

RngStream::RngStream(std::uint64_t key, std::uint64_t stream, std::uint64_t position)
    : key_(key), stream_(stream), pos_(position) {}

double RngStream::uniform() {
  const std::uint64_t block = pos_ / 2;
  if (block != cached_block_) {
    simd::kernels().philox_uniforms(key_, stream_, block, 1, cache_);
    cached_block_ = block;
  }
  return cache_[pos_++ % 2];
}

double RngStream::normal() {
  double u[2];
  u[0] = uniform();
  u[1] = uniform();
  double z[2];
  simd::kernels().box_muller(u, 1, 1.0, z);
  return z[0];
}

double RngStream::exponential(double rate) { return -simd::ref_log(uniform()) / rate; }

void RngStream::fill_uniform(std::span<double> out) {
  const std::size_t n = out.size();
  std::size_t i = 0;
  if (n > 0 && pos_ % 2 == 1) out[i++] = uniform();
  const std::size_t nb = (n - i) / 2;
  if (nb > 0) {
    simd::kernels().philox_uniforms(key_, stream_, pos_ / 2, nb, out.data() + i);
    pos_ += 2 * nb;
    i += 2 * nb;
  }
  if (i < n) out[i] = uniform();
}

void RngStream::fill_normal(std::span<double> out, double scale) {
  const std::size_t n = out.size();
  const std::size_t pairs = (n + 1) / 2;
  scratch_.resize(2 * pairs);
  fill_uniform(scratch_);
  const auto& k = simd::kernels();
  k.box_muller(scratch_.data(), n / 2, scale, out.data());
  if (n % 2 == 1) {
    double z[2];
    k.box_muller(scratch_.data() + 2 * (pairs - 1), 1, scale, z);
    out[n - 1] = z[0];
  }
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index)
    : brownian(seed, stream_id(path_index, StreamRole::brownian)),
      bridge(seed, stream_id(path_index, StreamRole::bridge)),
      clock(seed, stream_id(path_index, StreamRole::clock)),
      kill(seed, stream_id(path_index, StreamRole::kill)),
      barrier(seed, stream_id(path_index, StreamRole::barrier)),
      aux(seed, stream_id(path_index, StreamRole::aux)) {}

}  // namespace wentzell
