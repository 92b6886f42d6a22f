// AVX2 variants. This translation unit is compiled with -mavx2; the
// dispatcher only routes here after a runtime cpuid check.

#include "corpuslm/kernels.hpp"

#ifdef CORPUSLM_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <bit>
#include <cstring>

namespace corpuslm::kernels::avx2 {

namespace {

inline std::uint64_t load_u64(const std::uint8_t* p) {
  std::uint64_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

// 64x64 -> low 64 multiply per lane (AVX2 has no vpmullq).
inline __m256i mullo64(__m256i a, __m256i b) {
  const __m256i a_hi = _mm256_srli_epi64(a, 32);
  const __m256i b_hi = _mm256_srli_epi64(b, 32);
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(a_hi, b),
                                         _mm256_mul_epu32(a, b_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

// lanes(v) <= 255, c arbitrary: exact v*c mod 2^64 using two 32-bit muls.
inline __m256i mul_byte_const(__m256i v, std::uint64_t c) {
  const __m256i lo = _mm256_mul_epu32(v, _mm256_set1_epi64x(c & 0xFFFFFFFFu));
  const __m256i hi = _mm256_mul_epu32(v, _mm256_set1_epi64x(c >> 32));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(hi, 32));
}

// lanes j of the result = byte (k+j) of x, zero-extended to u64.
inline __m256i bytes_at(std::uint64_t x, unsigned k) {
  const auto y = static_cast<int>(static_cast<std::uint32_t>(x >> (8 * k)));
  return _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(y));
}

}  // namespace

std::size_t utf8_validate(std::span<const std::uint8_t> data) {
  const std::size_t n = data.size();
  const std::uint8_t* d = data.data();
  std::size_t i = 0;
  while (i < n) {
    if (d[i] < 0x80) {
      ++i;
      while (i + 32 <= n) {
        const __m256i v =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d + i));
        if (_mm256_movemask_epi8(v) != 0) break;
        i += 32;
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
  const __m256i mask = _mm256_set1_epi8(static_cast<char>(0xC0));
  const __m256i cont = _mm256_set1_epi8(static_cast<char>(0x80));
  std::size_t continuations = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d + i));
    const __m256i eq = _mm256_cmpeq_epi8(_mm256_and_si256(v, mask), cont);
    continuations += std::popcount(
        static_cast<std::uint32_t>(_mm256_movemask_epi8(eq)));
  }
  for (; i < n; ++i) continuations += (d[i] & 0xC0) == 0x80;
  return n - continuations;
}

void window_hash_scan(std::span<const std::uint8_t> data, std::size_t window,
                      std::span<std::uint64_t> out) {
  const std::size_t n = data.size();
  if (window == 0 || n < window) return;
  const std::size_t m = n - window + 1;
  if (m < 16) {
    scalar::window_hash_scan(data, window, out);
    return;
  }
  const std::uint8_t* d = data.data();
  const std::uint64_t B = detail::kHashBase;
  const std::uint64_t bw = detail::pow64(B, window);

  // First four positions by the scalar recurrence.
  std::uint64_t h = 0;
  for (std::size_t k = 0; k < window; ++k) h = h * B + d[k];
  out[0] = h;
  for (std::size_t i = 1; i < 4; ++i) {
    h = h * B + d[i + window - 1] - d[i - 1] * bw;
    out[i] = h;
  }

  // Jump-by-4 recurrence: lane j carries position i+j and advances four
  // positions per step, ingesting 4 bytes ahead of the window and expelling
  // 4 bytes behind it. Exact mod-2^64 algebra keeps this bit-identical to
  // the scalar roll.
  const std::uint64_t b2 = B * B, b3 = b2 * B, b4 = b3 * B;
  const std::uint64_t in_c[4] = {b3, b2, B, 1};
  const std::uint64_t out_c[4] = {bw * b3, bw * b2, bw * B, bw};
  const __m256i b4v = _mm256_set1_epi64x(static_cast<long long>(b4));

  __m256i hv =
      _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out.data()));
  std::size_t i = 0;
  while (i + 9 <= m) {
    const std::uint64_t x_in = load_u64(d + i + window);
    const std::uint64_t x_out = load_u64(d + i);
    __m256i acc = mullo64(hv, b4v);
    for (unsigned k = 0; k < 4; ++k) {
      acc = _mm256_add_epi64(acc, mul_byte_const(bytes_at(x_in, k), in_c[k]));
      acc =
          _mm256_sub_epi64(acc, mul_byte_const(bytes_at(x_out, k), out_c[k]));
    }
    hv = acc;
    i += 4;
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), hv);
  }

  // Tail by the scalar roll continuing from the last emitted hash.
  for (std::size_t p = i + 4; p < m; ++p) {
    out[p] = out[p - 1] * B + d[p + window - 1] - d[p - 1] * bw;
  }
}

double sum_f64(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  }
  const __m128d halves = _mm_add_pd(_mm256_castpd256_pd128(acc),
                                    _mm256_extractf128_pd(acc, 1));
  double s = _mm_cvtsd_f64(halves) +
             _mm_cvtsd_f64(_mm_unpackhi_pd(halves, halves));
  for (; i < n; ++i) s += x[i];
  return s;
}

}  // namespace corpuslm::kernels::avx2

#endif  // CORPUSLM_HAVE_AVX2_BUILD
