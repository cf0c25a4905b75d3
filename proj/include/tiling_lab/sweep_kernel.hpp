#pragma once

#include <cstdint>
#include <vector>

#include "tiling_lab/lattice.hpp"

namespace tiling_lab {

enum class KernelKind { Scalar, Avx2 };

bool kernel_available(KernelKind k);
// Best available kernel; TILING_LAB_KERNEL=scalar forces the reference kernel.
KernelKind default_kernel();
const char* kernel_name(KernelKind k);

// Padded int16 copy of a height function for the colour-sweep kernels.
struct SweepGrid {
  std::vector<std::int16_t> cells;
  friend bool operator==(const SweepGrid&, const SweepGrid&) = default;
};

// Systematic heat-bath scan: colours (x + y) mod 3 = 0, 1, 2 in turn, every vertex of one
// colour updated at once.  A vertex moves to the top of its legal interval when its coin bit
// is set and to the bottom otherwise, so sweeps driven by the same coins are monotone.  Coins
// are a pure function of (key, sweep, colour, row, column), which makes the scalar and vector
// kernels bit-identical and lets coupling from the past replay any sweep.
class ColourSweeper {
 public:
  explicit ColourSweeper(const Domain& d, KernelKind kind = default_kernel());

  KernelKind kind() const { return kind_; }
  SweepGrid make_grid(const std::vector<std::int32_t>& heights) const;
  std::vector<std::int32_t> read(const SweepGrid& g) const;

  void sweep(SweepGrid& g, std::uint64_t key, std::uint64_t sweep_index) const;
  // Same coins applied to both grids.
  void sweep_pair(SweepGrid& a, SweepGrid& b, std::uint64_t key, std::uint64_t sweep_index) const;

  struct Layout {
    int x0 = 0;       // lattice x of column 0
    int y0 = 0;       // lattice y of row 0 (one padding row below the domain)
    int stride = 0;   // columns per row, multiple of 64
    int rows = 0;
    std::vector<std::uint16_t> masks[3];  // 0xFFFF on interior vertices of each colour
    std::vector<int> chunk_lo[3];         // first/last active 16-lane chunk per row, -1 if none
    std::vector<int> chunk_hi[3];
  };
  const Layout& layout() const { return layout_; }

 private:
  void run(SweepGrid* a, SweepGrid* b, std::uint64_t key, std::uint64_t sweep_index) const;

  std::vector<std::size_t> index_;  // dense vertex index -> cell
  Layout layout_;
  KernelKind kind_;
};

namespace detail {
// Updates the active chunks of one row for one colour.  `coins` has stride/64 words.
void row_update_scalar(std::int16_t* g, const std::uint16_t* mask, const std::uint64_t* coins, int stride, int row, int chunk_lo,
                       int chunk_hi);
void row_update_avx2(std::int16_t* g, const std::uint16_t* mask, const std::uint64_t* coins, int stride, int row, int chunk_lo,
                     int chunk_hi);
}  // namespace detail

}  // namespace tiling_lab
