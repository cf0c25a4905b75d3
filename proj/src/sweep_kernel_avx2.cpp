#include "tiling_lab/sweep_kernel.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "tiling_lab/error.hpp"

namespace tiling_lab::detail {

#if defined(__AVX2__)

void row_update_avx2(std::int16_t* g, const std::uint16_t* mask, const std::uint64_t* coins, int stride, int row, int chunk_lo,
                     int chunk_hi) {
  std::int16_t* r = g + static_cast<std::ptrdiff_t>(row) * stride;
  const std::uint16_t* mr = mask + static_cast<std::ptrdiff_t>(row) * stride;
  const __m256i one = _mm256_set1_epi16(1);
  const __m256i lane_bits = _mm256_setr_epi16(1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384,
                                              static_cast<short>(0x8000));
  for (int k = chunk_lo; k <= chunk_hi; ++k) {
    int col = 16 * k;
    auto load = [&](int offset) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(r + col + offset)); };
    __m256i old = load(0);
    __m256i w = load(-1), e = load(1);
    __m256i n = load(stride), ne = load(stride + 1);
    __m256i s = load(-stride), sw = load(-stride - 1);
    // w, n, sw sit at or one below v; e, s, ne sit at or one above v.
    __m256i below_max = _mm256_max_epi16(_mm256_max_epi16(w, n), sw);
    __m256i below_min = _mm256_min_epi16(_mm256_min_epi16(w, n), sw);
    __m256i above_max = _mm256_max_epi16(_mm256_max_epi16(e, s), ne);
    __m256i above_min = _mm256_min_epi16(_mm256_min_epi16(e, s), ne);
    __m256i lower = _mm256_max_epi16(below_max, _mm256_sub_epi16(above_max, one));
    __m256i upper = _mm256_min_epi16(above_min, _mm256_add_epi16(below_min, one));
    auto bits = static_cast<short>((coins[col >> 6] >> (col & 63)) & 0xFFFFu);
    __m256i coin = _mm256_cmpeq_epi16(_mm256_and_si256(_mm256_set1_epi16(bits), lane_bits), lane_bits);
    __m256i fresh = _mm256_blendv_epi8(lower, upper, coin);
    __m256i active = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mr + col));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(r + col), _mm256_blendv_epi8(old, fresh, active));
  }
}

#else

void row_update_avx2(std::int16_t*, const std::uint16_t*, const std::uint64_t*, int, int, int, int) {
  throw InvalidInput("avx2 kernel not compiled for this target");
}

#endif

}  // namespace tiling_lab::detail
