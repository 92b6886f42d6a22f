#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Byte-stream and reduction kernels behind the corpus pipeline. Every kernel
// has a scalar reference implementation; on x86-64 with AVX2 (and on AArch64
// with NEON where noted) a vector variant is selected at runtime. Variants
// are bit-identical to the reference: the hash recurrence is exact mod 2^64
// arithmetic and the float reduction fixes its summation order, so tests can
// (and do) require exact equality between backends.
//
// Set CORPUSLM_KERNELS=scalar|avx2|neon to override dispatch.

namespace corpuslm::kernels {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Backend { scalar, avx2, neon };

Backend active();
const char* backend_name(Backend b);

// Offset of the first byte of the first invalid UTF-8 sequence, or npos if
// the whole buffer is valid. Rejects overlongs, surrogates, values beyond
// U+10FFFF, and truncated sequences (truncation reported at the lead byte).
std::size_t utf8_validate(std::span<const std::uint8_t> data);

// Number of Unicode scalars in valid UTF-8 = bytes that are not 10xxxxxx.
std::size_t count_codepoints(std::span<const std::uint8_t> data);

// Polynomial window hashes: out[i] = sum_k data[i+k] * B^(window-1-k) mod
// 2^64 for every window position; out.size() must be data.size()-window+1.
void window_hash_scan(std::span<const std::uint8_t> data, std::size_t window,
                      std::span<std::uint64_t> out);

// Reduction with a fixed order: four striped partial sums combined as
// (s0+s2)+(s1+s3), then the tail added left to right. Bit-stable across
// backends and thread counts by construction.
double sum_f64(std::span<const double> x);

namespace scalar {
std::size_t utf8_validate(std::span<const std::uint8_t> data);
std::size_t count_codepoints(std::span<const std::uint8_t> data);
void window_hash_scan(std::span<const std::uint8_t> data, std::size_t window,
                      std::span<std::uint64_t> out);
double sum_f64(std::span<const double> x);

// Validates the single sequence starting at data[pos]; advances pos past it
// and returns true, or leaves pos at the offending lead byte and returns
// false. Shared by the scalar and vector validators so error offsets agree.
bool utf8_step(std::span<const std::uint8_t> data, std::size_t& pos);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CORPUSLM_HAVE_AVX2_BUILD 1
namespace avx2 {
std::size_t utf8_validate(std::span<const std::uint8_t> data);
std::size_t count_codepoints(std::span<const std::uint8_t> data);
void window_hash_scan(std::span<const std::uint8_t> data, std::size_t window,
                      std::span<std::uint64_t> out);
double sum_f64(std::span<const double> x);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define CORPUSLM_HAVE_NEON_BUILD 1
namespace neon {
std::size_t utf8_validate(std::span<const std::uint8_t> data);
std::size_t count_codepoints(std::span<const std::uint8_t> data);
double sum_f64(std::span<const double> x);
// window_hash_scan has no NEON variant (no 64-bit lane multiply); the
// dispatcher falls back to scalar for it.
}  // namespace neon
#endif

namespace detail {
// B is an odd 64-bit multiplier; pow64(B, k) gives the window roll-out
// factors. Exposed for the AVX2 variant and for tests.
inline constexpr std::uint64_t kHashBase = 0x100000001B3ULL;
std::uint64_t pow64(std::uint64_t base, std::uint64_t exp);
}  // namespace detail

}  // namespace corpuslm::kernels
