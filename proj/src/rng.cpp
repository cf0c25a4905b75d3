#include "tiling_lab/rng.hpp"

#include <string>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}

Rng Rng::from_key(std::uint64_t key) {
  Rng r;
  r.key_ = key;
  return r;
}

std::uint64_t Rng::at(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGamma); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInput("rng: bound must be positive");
  // Rejection on the top of the range keeps the result exactly uniform.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    std::uint64_t r = next_u64();
    if (r < limit) return r % bound;
  }
}

Rng Rng::stream(std::string_view name) const { return from_key(mix64(key_ ^ mix64(fnv1a(name)))); }

Rng Rng::stream(std::string_view name, std::uint64_t index) const {
  std::string full(name);
  full += ':';
  full += std::to_string(index);
  return stream(full);
}

}  // namespace tiling_lab
