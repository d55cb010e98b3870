#ifndef EIVM_RNG_HPP
#define EIVM_RNG_HPP

#include <cstdint>

#include "eivm/dist.hpp"

// Counter-based splittable generator in the SplittableRandom/SplitMix64
// family: the k-th output is a strong 64-bit finalizer applied to
// key + k*gamma, so a stream is a pure function of its key and every
// (replication, stream) pair can derive an independent key from the master
// seed. Results are therefore independent of execution order and worker
// count.

namespace eivm::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Key for substream `sub` of the stream identified by `key`.
inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t sub) {
  return mix64(mix64(key + kGoldenGamma) ^ mix64(sub + 0xD1B54A32D192ED03ull));
}

class Counter {
 public:
  explicit Counter(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() { return mix64(state_ += kGoldenGamma); }

  // Uniform on the open interval (0,1).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal by inverse transform; one uniform per variate.
  double next_normal() { return dist::normal_quantile(next_unit()); }

  bool next_sign_bit() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace eivm::rng

#endif  // EIVM_RNG_HPP
