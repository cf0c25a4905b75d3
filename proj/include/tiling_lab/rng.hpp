#pragma once

#include <cstdint>
#include <string_view>

namespace tiling_lab {

// Counter-based generator: value i of a stream is a pure function of (key, i), so any
// draw can be recomputed without replaying the stream.  Child streams are derived by
// hashing the key with a name.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);
  static Rng from_key(std::uint64_t key);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t at(std::uint64_t counter) const;
  std::uint64_t next_u64() { return at(counter_++); }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t bound);

  Rng stream(std::string_view name) const;
  Rng stream(std::string_view name, std::uint64_t index) const;  // "<name>:<index>"

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace tiling_lab
