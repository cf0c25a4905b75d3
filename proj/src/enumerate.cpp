#include "tiling_lab/enumerate.hpp"

#include <algorithm>
#include <map>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

namespace {

std::vector<int> profile_of(std::uint64_t mask, int width, int west) {
  std::vector<int> h(static_cast<std::size_t>(width + 1));
  h[0] = west;
  for (int k = 0; k < width; ++k) h[static_cast<std::size_t>(k + 1)] = h[static_cast<std::size_t>(k)] + static_cast<int>((mask >> k) & 1u);
  return h;
}

std::uint64_t mask_of(const std::vector<int>& h) {
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k + 1 < h.size(); ++k)
    if (h[k + 1] - h[k] == 1) mask |= std::uint64_t{1} << k;
  return mask;
}

bool legal_row(const std::vector<int>& h) {
  for (std::size_t k = 0; k + 1 < h.size(); ++k)
    if (h[k + 1] - h[k] != 0 && h[k + 1] - h[k] != 1) return false;
  return true;
}

struct RowContext {
  const Domain* d;
  const std::vector<int>* west;
  const std::vector<int>* east;
  const std::vector<std::vector<int>>* fixed;
};

// Enumerates the profiles of row y+1 compatible with profile `cur` of row y.
template <class F>
void for_each_successor(const RowContext& c, int y, const std::vector<int>& cur, F&& emit) {
  const Domain& d = *c.d;
  int r = y + 1 - d.y_min();
  int L = d.left(y + 1), R = d.right(y + 1);
  int L0 = d.left(y), R0 = d.right(y);
  const std::vector<int>& fixed = (*c.fixed)[static_cast<std::size_t>(r)];
  std::vector<int> next(static_cast<std::size_t>(R - L + 1));
  auto below = [&](int x) { return cur[static_cast<std::size_t>(x - L0)]; };
  auto rec = [&](auto&& self, int x) -> void {
    if (x > R) {
      emit(next);
      return;
    }
    int lo = -(1 << 29), hi = 1 << 29;
    if (x >= L0 && x <= R0) {
      lo = std::max(lo, below(x) - 1);
      hi = std::min(hi, below(x));
    }
    if (x - 1 >= L0 && x - 1 <= R0) {
      lo = std::max(lo, below(x - 1));
      hi = std::min(hi, below(x - 1) + 1);
    }
    if (x > L) {
      int prev = next[static_cast<std::size_t>(x - 1 - L)];
      lo = std::max(lo, prev);
      hi = std::min(hi, prev + 1);
    }
    if (!fixed.empty()) {
      int v = fixed[static_cast<std::size_t>(x - L)];
      lo = std::max(lo, v);
      hi = std::min(hi, v);
    } else if (x == L) {
      int v = (*c.west)[static_cast<std::size_t>(r)];
      lo = std::max(lo, v);
      hi = std::min(hi, v);
    } else if (x == R) {
      int v = (*c.east)[static_cast<std::size_t>(r)];
      lo = std::max(lo, v);
      hi = std::min(hi, v);
    }
    for (int v = lo; v <= hi; ++v) {
      next[static_cast<std::size_t>(x - L)] = v;
      self(self, x + 1);
    }
  };
  rec(rec, L);
}

}  // namespace

TilingEnumeration enumerate_tilings(std::shared_ptr<const Domain> dp, const BoundaryHeight& h, std::size_t state_cap) {
  if (!dp) throw InvalidInput("enumeration: null domain");
  const Domain& d = *dp;
  TilingEnumeration e;
  e.domain_ = dp;
  int rows = d.row_count();
  for (int y = d.y_min(); y <= d.y_max(); ++y) {
    if (d.right(y) - d.left(y) > 62) throw TooLarge("enumeration: row wider than 62 edges");
    e.west_.push_back(h.at(d, d.left(y), y));
    e.east_.push_back(h.at(d, d.right(y), y));
    std::vector<int> prof;
    if (y == d.y_min() || y == d.y_max())
      for (int x = d.left(y); x <= d.right(y); ++x) prof.push_back(h.at(d, x, y));
    e.fixed_.push_back(std::move(prof));
  }
  RowContext ctx{&d, &e.west_, &e.east_, &e.fixed_};
  e.layers_.assign(static_cast<std::size_t>(rows), {});
  const std::vector<int>& first = e.fixed_.front();
  if (!legal_row(first) || (rows > 1 && !legal_row(e.fixed_.back()))) {
    e.count_ = 0;
    e.layers_.clear();
    return e;
  }
  e.layers_[0][mask_of(first)] = 1;
  e.state_count_ = 1;
  for (int r = 0; r + 1 < rows; ++r) {
    int y = d.y_min() + r;
    int w = d.right(y) - d.left(y);
    auto& out = e.layers_[static_cast<std::size_t>(r + 1)];
    // Deterministic iteration: sort the keys of the current layer.
    std::vector<std::uint64_t> keys;
    for (const auto& kv : e.layers_[static_cast<std::size_t>(r)]) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t key : keys) {
      const BigInt& cnt = e.layers_[static_cast<std::size_t>(r)].at(key);
      std::vector<int> cur = profile_of(key, w, e.west_[static_cast<std::size_t>(r)]);
      for_each_successor(ctx, y, cur, [&](const std::vector<int>& next) {
        auto [it, inserted] = out.try_emplace(mask_of(next), 0);
        it->second += cnt;
        if (inserted && ++e.state_count_ > state_cap) throw TooLarge("enumeration: row-profile state cap exceeded");
      });
    }
  }
  e.count_ = 0;
  for (const auto& kv : e.layers_.back()) e.count_ += kv.second;
  // Keep only profiles that reach the last row, so iteration never backtracks.
  for (int r = rows - 2; r >= 0; --r) {
    int y = d.y_min() + r;
    int w = d.right(y) - d.left(y);
    auto& layer = e.layers_[static_cast<std::size_t>(r)];
    const auto& above = e.layers_[static_cast<std::size_t>(r + 1)];
    for (auto it = layer.begin(); it != layer.end();) {
      bool alive = false;
      for_each_successor(ctx, y, profile_of(it->first, w, e.west_[static_cast<std::size_t>(r)]),
                         [&](const std::vector<int>& next) { alive = alive || above.count(mask_of(next)) > 0; });
      it = alive ? std::next(it) : layer.erase(it);
    }
  }
  return e;
}

void TilingEnumeration::for_each(const std::function<void(const HeightFunction&)>& visit) const {
  if (count_ == 0) return;
  const Domain& d = *domain_;
  RowContext ctx{&d, &west_, &east_, &fixed_};
  int rows = d.row_count();
  std::vector<std::int32_t> H(d.vertex_count());
  auto store = [&](int r, const std::vector<int>& prof) {
    int y = d.y_min() + r;
    std::copy(prof.begin(), prof.end(), H.begin() + static_cast<std::ptrdiff_t>(d.index(d.left(y), y)));
  };
  auto rec = [&](auto&& self, int r, const std::vector<int>& prof) -> void {
    store(r, prof);
    if (r + 1 == rows) {
      visit(HeightFunction(domain_, H));
      return;
    }
    const auto& above = layers_[static_cast<std::size_t>(r + 1)];
    for_each_successor(ctx, d.y_min() + r, prof, [&](const std::vector<int>& next) {
      if (above.count(mask_of(next))) self(self, r + 1, next);
    });
  };
  rec(rec, 0, fixed_.front());
}

std::vector<HeightFunction> TilingEnumeration::all() const {
  std::vector<HeightFunction> out;
  for_each([&](const HeightFunction& h) { out.push_back(h); });
  return out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r = 1;
  k = std::min(k, n - k);
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

BridgeCount bridge_count(const ParticleConfig& start, const ParticleConfig& end, int T, int direct_limit) {
  start.validate();
  end.validate();
  if (start.m() != end.m()) throw InvalidInput("bridge count: start and end must hold the same number of particles");
  if (T < 0) throw InvalidInput("bridge count: T must be nonnegative");
  int m = start.m();
  std::vector<std::vector<BigInt>> mat(static_cast<std::size_t>(m), std::vector<BigInt>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = binomial(T, end.positions[static_cast<std::size_t>(j)] - start.positions[static_cast<std::size_t>(i)]);
  BridgeCount out;
  out.determinant = bareiss_determinant(std::move(mat));
  if (m <= direct_limit) {
    std::map<std::vector<int>, BigInt> layer{{start.positions, BigInt(1)}};
    for (int t = 0; t < T; ++t) {
      std::map<std::vector<int>, BigInt> next;
      for (const auto& [cfg, cnt] : layer) {
        for (std::uint32_t e = 0; e < (1u << m); ++e) {
          std::vector<int> nc(cfg);
          bool ok = true;
          for (int i = 0; i < m; ++i) {
            nc[static_cast<std::size_t>(i)] += static_cast<int>((e >> i) & 1u);
            if (i > 0 && nc[static_cast<std::size_t>(i)] <= nc[static_cast<std::size_t>(i - 1)]) {
              ok = false;
              break;
            }
          }
          // Prune configurations that can no longer reach the end.
          for (int i = 0; ok && i < m; ++i) {
            int gap = end.positions[static_cast<std::size_t>(i)] - nc[static_cast<std::size_t>(i)];
            if (gap < 0 || gap > T - t - 1) ok = false;
          }
          if (ok) next[nc] += cnt;
        }
      }
      layer = std::move(next);
    }
    auto it = layer.find(end.positions);
    out.direct = it == layer.end() ? BigInt(0) : it->second;
  }
  return out;
}

}  // namespace tiling_lab
