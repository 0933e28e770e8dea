#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mqssd {

// splitmix64 finalizer; good avalanche for combining key components.
std::uint64_t mix64(std::uint64_t x);

// Deterministic random stream keyed by a tuple of 64-bit values. The same
// key yields the same sequence on every platform: the engine is the fully
// specified std::mt19937_64 and all value mappings (unit interval, normal,
// bounded integers) are implemented here rather than taken from the
// implementation-defined standard distributions.
class KeyedRng {
 public:
  explicit KeyedRng(std::initializer_list<std::uint64_t> key);

  std::uint64_t next_u64();
  // Uniform in (0, 1), 53-bit resolution, never exactly 0 or 1.
  double next_unit();
  // Standard normal via Box-Muller.
  double next_normal();
  // Uniform in [0, n), unbiased (rejection sampling). n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mqssd
