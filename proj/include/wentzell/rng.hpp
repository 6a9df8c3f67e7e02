#pragma once
// Counter-based random streams. A draw is fully determined by
// (key, stream, position), so results do not depend on thread count,
// chunking or the kernel ISA.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace wentzell {

std::uint64_t splitmix64(std::uint64_t x);
// Stable 64-bit hash used to derive per-experiment seeds from names.
std::uint64_t fnv1a64(std::string_view text);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

class RngStream {
 public:
  RngStream(std::uint64_t key, std::uint64_t stream, std::uint64_t position = 0);

  // Uniform in the open interval (0,1).
  double uniform();
  // Standard normal; consumes two uniforms and uses the cosine branch.
  double normal();
  double exponential(double rate);

  void fill_uniform(std::span<double> out);
  // Normals times scale; consumes out.size() uniforms rounded up to even.
  void fill_normal(std::span<double> out, double scale = 1.0);

  std::uint64_t key() const { return key_; }
  std::uint64_t stream() const { return stream_; }
  // Number of uniforms consumed so far.
  std::uint64_t position() const { return pos_; }

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t pos_;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  double cache_[2] = {0.0, 0.0};
  std::vector<double> scratch_;
};

// Independent streams for one simulated path.
enum class StreamRole : std::uint64_t { brownian = 0, bridge = 1, clock = 2, kill = 3, barrier = 4, aux = 5 };

inline std::uint64_t stream_id(std::uint64_t path_index, StreamRole role) {
  return (path_index << 3) | static_cast<std::uint64_t>(role);
}

struct PathRng {
  RngStream brownian, bridge, clock, kill, barrier, aux;
  PathRng(std::uint64_t seed, std::uint64_t path_index);
};

}  // namespace wentzell
