#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tiling_lab/lattice.hpp"
#include "tiling_lab/tiling.hpp"

namespace tiling_lab {

using BigInt = boost::multiprecision::cpp_int;

// Exact enumeration of the height functions extending boundary data, by a row-to-row
// transfer over row profiles (one bit per horizontal edge).  Rows wider than 62 edges or
// more than `state_cap` distinct row profiles in total raise TooLarge.
class TilingEnumeration {
 public:
  const BigInt& count() const { return count_; }
  std::size_t state_count() const { return state_count_; }

  // Visits every extension in a fixed order.
  void for_each(const std::function<void(const HeightFunction&)>& visit) const;
  std::vector<HeightFunction> all() const;

 private:
  friend TilingEnumeration enumerate_tilings(std::shared_ptr<const Domain> d, const BoundaryHeight& h, std::size_t state_cap);

  std::shared_ptr<const Domain> domain_;
  std::vector<int> west_;  // height at the left end of each row
  std::vector<int> east_;
  std::vector<std::vector<int>> fixed_;  // full profile for rows that lie entirely on the boundary
  std::vector<std::unordered_map<std::uint64_t, BigInt>> layers_;  // surviving profiles per row
  BigInt count_;
  std::size_t state_count_ = 0;
};

TilingEnumeration enumerate_tilings(std::shared_ptr<const Domain> d, const BoundaryHeight& h, std::size_t state_cap = std::size_t{1} << 22);

struct BridgeCount {
  BigInt determinant;           // Lindstrom-Gessel-Viennot
  std::optional<BigInt> direct;  // transfer over configurations, for m <= direct_limit
};

BridgeCount bridge_count(const ParticleConfig& start, const ParticleConfig& end, int T, int direct_limit = 8);

BigInt binomial(int n, int k);

}  // namespace tiling_lab
