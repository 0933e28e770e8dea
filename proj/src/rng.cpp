#include "mqssd/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mqssd {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

KeyedRng::KeyedRng(std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = 0x8f3ad1c2e96b5d07ull;
  for (std::uint64_t part : key) {
    h = mix64(h ^ mix64(part));
  }
  engine_.seed(h);
}

std::uint64_t KeyedRng::next_u64() { return engine_(); }

double KeyedRng::next_unit() {
  // 53 significant bits; shift keeps the mapping exact in double.
  double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

double KeyedRng::next_normal() {
  double u1 = next_unit();
  double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t KeyedRng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be > 0");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

}  // namespace mqssd
