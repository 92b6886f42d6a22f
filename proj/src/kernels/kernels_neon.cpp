// NEON variants for AArch64. window_hash_scan stays scalar there (no 64-bit
// lane multiply); the dispatcher knows.

#include "corpuslm/kernels.hpp"

#ifdef CORPUSLM_HAVE_NEON_BUILD

#include <arm_neon.h>

namespace corpuslm::kernels::neon {

std::size_t utf8_validate(std::span<const std::uint8_t> data) {
  const std::size_t n = data.size();
  const std::uint8_t* d = data.data();
  std::size_t i = 0;
  while (i < n) {
    if (d[i] < 0x80) {
      ++i;
      while (i + 16 <= n) {
        const uint8x16_t v = vld1q_u8(d + i);
        if (vmaxvq_u8(v) >= 0x80) break;
        i += 16;
      }
      continue;
    }
    if (!scalar::utf8_step(data, i)) return i;
  }
  return npos;
}

std::size_t count_codepoints(std::span<const std::uint8_t> data) {
  const std::size_t n = data.size();
  const std::uint8_t* d = data.data();
  const uint8x16_t mask = vdupq_n_u8(0xC0);
  const uint8x16_t cont = vdupq_n_u8(0x80);
  std::size_t continuations = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t v = vld1q_u8(d + i);
    const uint8x16_t eq = vceqq_u8(vandq_u8(v, mask), cont);
    // Matching lanes are 0xFF; summing ones gives the lane count.
    continuations += vaddvq_u8(vshrq_n_u8(eq, 7));
  }
  for (; i < n; ++i) continuations += (d[i] & 0xC0) == 0x80;
  return n - continuations;
}

double sum_f64(std::span<const double> x) {
  const std::size_t n = x.size();
  // Two 2-lane accumulators emulate the fixed 4-stripe order.
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vld1q_f64(x.data() + i));
    acc23 = vaddq_f64(acc23, vld1q_f64(x.data() + i + 2));
  }
  const float64x2_t halves = vaddq_f64(acc01, acc23);  // [s0+s2, s1+s3]
  double s = vgetq_lane_f64(halves, 0) + vgetq_lane_f64(halves, 1);
  for (; i < n; ++i) s += x[i];
  return s;
}

}  // namespace corpuslm::kernels::neon

#endif  // CORPUSLM_HAVE_NEON_BUILD
