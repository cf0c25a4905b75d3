#include "tiling_lab/sweep_kernel.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "tiling_lab/error.hpp"
#include "tiling_lab/rng.hpp"

namespace tiling_lab {

namespace {

constexpr int kGuard = 32;

int mod3(int v) { return ((v % 3) + 3) % 3; }

}  // namespace

bool kernel_available(KernelKind k) {
  if (k == KernelKind::Scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

KernelKind default_kernel() {
  const char* env = std::getenv("TILING_LAB_KERNEL");
  if (env && std::strcmp(env, "scalar") == 0) return KernelKind::Scalar;
  return kernel_available(KernelKind::Avx2) ? KernelKind::Avx2 : KernelKind::Scalar;
}

const char* kernel_name(KernelKind k) { return k == KernelKind::Avx2 ? "avx2" : "scalar"; }

namespace detail {

void row_update_scalar(std::int16_t* g, const std::uint16_t* mask, const std::uint64_t* coins, int stride, int row, int chunk_lo,
                       int chunk_hi) {
  std::int16_t* r = g + static_cast<std::ptrdiff_t>(row) * stride;
  const std::uint16_t* mr = mask + static_cast<std::ptrdiff_t>(row) * stride;
  for (int col = 16 * chunk_lo; col < 16 * chunk_hi + 16; ++col) {
    if (!mr[col]) continue;
    int w = r[col - 1], e = r[col + 1];
    int n = r[col + stride], ne = r[col + stride + 1];
    int s = r[col - stride], sw = r[col - stride - 1];
    int lower = std::max({w, n, sw, e - 1, s - 1, ne - 1});
    int upper = std::min({w + 1, n + 1, sw + 1, e, s, ne});
    bool coin = (coins[col >> 6] >> (col & 63)) & 1u;
    r[col] = static_cast<std::int16_t>(coin ? upper : lower);
  }
}

}  // namespace detail

ColourSweeper::ColourSweeper(const Domain& d, KernelKind kind) : kind_(kind) {
  if (!kernel_available(kind)) throw InvalidInput("sweep kernel not available on this CPU");
  BoundingBox bb = d.bounding_box();
  Layout& L = layout_;
  L.x0 = bb.x_min - 16;
  L.y0 = d.y_min() - 1;
  int width = bb.x_max - bb.x_min + 1;
  L.stride = ((16 + width + 16) + 63) / 64 * 64;
  L.rows = d.row_count() + 2;
  std::size_t cells = static_cast<std::size_t>(L.stride) * static_cast<std::size_t>(L.rows);
  for (int c = 0; c < 3; ++c) {
    L.masks[c].assign(cells, 0);
    L.chunk_lo[c].assign(static_cast<std::size_t>(L.rows), -1);
    L.chunk_hi[c].assign(static_cast<std::size_t>(L.rows), -1);
  }
  index_.resize(d.vertex_count());
  for (int y = d.y_min(); y <= d.y_max(); ++y)
    for (int x = d.left(y); x <= d.right(y); ++x) {
      int row = y - L.y0, col = x - L.x0;
      std::size_t cell = static_cast<std::size_t>(row) * static_cast<std::size_t>(L.stride) + static_cast<std::size_t>(col);
      index_[d.index(x, y)] = cell;
      if (d.is_boundary(x, y)) continue;
      int c = mod3(x + y);
      L.masks[c][cell] = 0xFFFF;
      int chunk = col / 16;
      auto& lo = L.chunk_lo[c][static_cast<std::size_t>(row)];
      auto& hi = L.chunk_hi[c][static_cast<std::size_t>(row)];
      if (lo < 0 || chunk < lo) lo = chunk;
      hi = std::max(hi, chunk);
    }
}

SweepGrid ColourSweeper::make_grid(const std::vector<std::int32_t>& heights) const {
  if (heights.size() != index_.size()) throw InvalidInput("sweep grid: height count does not match the domain");
  SweepGrid g;
  g.cells.assign(static_cast<std::size_t>(layout_.stride) * static_cast<std::size_t>(layout_.rows) + 2 * kGuard, 0);
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (heights[i] < std::numeric_limits<std::int16_t>::min() + 2 || heights[i] > std::numeric_limits<std::int16_t>::max() - 2)
      throw TooLarge("sweep grid: heights exceed the 16-bit kernel range");
    g.cells[kGuard + index_[i]] = static_cast<std::int16_t>(heights[i]);
  }
  return g;
}

std::vector<std::int32_t> ColourSweeper::read(const SweepGrid& g) const {
  std::vector<std::int32_t> out(index_.size());
  for (std::size_t i = 0; i < index_.size(); ++i) out[i] = g.cells[kGuard + index_[i]];
  return out;
}

void ColourSweeper::sweep(SweepGrid& g, std::uint64_t key, std::uint64_t sweep_index) const { run(&g, nullptr, key, sweep_index); }

void ColourSweeper::sweep_pair(SweepGrid& a, SweepGrid& b, std::uint64_t key, std::uint64_t sweep_index) const {
  run(&a, &b, key, sweep_index);
}

void ColourSweeper::run(SweepGrid* a, SweepGrid* b, std::uint64_t key, std::uint64_t sweep_index) const {
  const Layout& L = layout_;
  Rng coins_rng = Rng::from_key(key);
  int words = L.stride / 64;
  std::vector<std::uint64_t> coins(static_cast<std::size_t>(words));
  auto update = kind_ == KernelKind::Avx2 ? &detail::row_update_avx2 : &detail::row_update_scalar;
  for (int c = 0; c < 3; ++c) {
    for (int row = 1; row + 1 < L.rows; ++row) {
      int lo = L.chunk_lo[c][static_cast<std::size_t>(row)];
      if (lo < 0) continue;
      int hi = L.chunk_hi[c][static_cast<std::size_t>(row)];
      std::uint64_t base = ((sweep_index * 3 + static_cast<std::uint64_t>(c)) * static_cast<std::uint64_t>(L.rows) + static_cast<std::uint64_t>(row)) *
                           static_cast<std::uint64_t>(words);
      for (int w = lo / 4; w <= hi / 4; ++w) coins[static_cast<std::size_t>(w)] = coins_rng.at(base + static_cast<std::uint64_t>(w));
      update(a->cells.data() + kGuard, L.masks[c].data(), coins.data(), L.stride, row, lo, hi);
      if (b) update(b->cells.data() + kGuard, L.masks[c].data(), coins.data(), L.stride, row, lo, hi);
    }
  }
}

}  // namespace tiling_lab
