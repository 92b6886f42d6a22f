#include "corpuslm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace corpuslm::kernels {

namespace detail {

std::uint64_t pow64(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

}  // namespace detail

namespace scalar {

bool utf8_step(std::span<const std::uint8_t> data, std::size_t& pos) {
  const std::size_t n = data.size();
  const std::uint8_t b0 = data[pos];
  if (b0 < 0x80) {
    ++pos;
    return true;
  }
  std::size_t len;
  std::uint32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return false;  // stray continuation or 0xF8..0xFF
  }
  if (pos + len > n) return false;
  for (std::size_t k = 1; k < len; ++k) {
    const std::uint8_t b = data[pos + k];
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (len == 2 && cp < 0x80) return false;                   // overlong
  if (len == 3 && cp < 0x800) return false;                  // overlong
  if (len == 4 && cp < 0x10000) return false;                // overlong
  if (cp >= 0xD800 && cp <= 0xDFFF) return false;            // surrogate
  if (cp > 0x10FFFF) return false;
  pos += len;
  return true;
}

std::size_t utf8_validate(std::span<const std::uint8_t> data) {
  std::size_t pos = 0;
  while (pos < data.size()) {
    if (!utf8_step(data, pos)) return pos;
  }
  return npos;
}

std::size_t count_codepoints(std::span<const std::uint8_t> data) {
  std::size_t count = 0;
  for (std::uint8_t b : data) {
    count += (b & 0xC0) != 0x80;
  }
  return count;
}

void window_hash_scan(std::span<const std::uint8_t> data, std::size_t window,
                      std::span<std::uint64_t> out) {
  const std::size_t n = data.size();
  if (window == 0 || n < window) return;
  const std::uint64_t B = detail::kHashBase;
  const std::uint64_t bw = detail::pow64(B, window);
  std::uint64_t h = 0;
  for (std::size_t k = 0; k < window; ++k) h = h * B + data[k];
  out[0] = h;
  for (std::size_t i = 1; i + window <= n; ++i) {
    h = h * B + data[i + window - 1] - data[i - 1] * bw;
    out[i] = h;
  }
}

double sum_f64(std::span<const double> x) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i];
    s1 += x[i + 1];
    s2 += x[i + 2];
    s3 += x[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += x[i];
  return s;
}

}  // namespace scalar

namespace {

Backend detect() {
  if (const char* e = std::getenv("CORPUSLM_KERNELS")) {
    if (std::strcmp(e, "scalar") == 0) return Backend::scalar;
#ifdef CORPUSLM_HAVE_AVX2_BUILD
    if (std::strcmp(e, "avx2") == 0 && __builtin_cpu_supports("avx2"))
      return Backend::avx2;
#endif
#ifdef CORPUSLM_HAVE_NEON_BUILD
    if (std::strcmp(e, "neon") == 0) return Backend::neon;
#endif
    return Backend::scalar;
  }
#ifdef CORPUSLM_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
#ifdef CORPUSLM_HAVE_NEON_BUILD
  return Backend::neon;
#endif
  return Backend::scalar;
}

}  // namespace

Backend active() {
  static const Backend b = detect();
  return b;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

std::size_t utf8_validate(std::span<const std::uint8_t> data) {
  switch (active()) {
#ifdef CORPUSLM_HAVE_AVX2_BUILD
    case Backend::avx2: return avx2::utf8_validate(data);
#endif
#ifdef CORPUSLM_HAVE_NEON_BUILD
    case Backend::neon: return neon::utf8_validate(data);
#endif
    default: return scalar::utf8_validate(data);
  }
}

std::size_t count_codepoints(std::span<const std::uint8_t> data) {
  switch (active()) {
#ifdef CORPUSLM_HAVE_AVX2_BUILD
    case Backend::avx2: return avx2::count_codepoints(data);
#endif
#ifdef CORPUSLM_HAVE_NEON_BUILD
    case Backend::neon: return neon::count_codepoints(data);
#endif
    default: return scalar::count_codepoints(data);
  }
}

void window_hash_scan(std::span<const std::uint8_t> data, std::size_t window,
                      std::span<std::uint64_t> out) {
  switch (active()) {
#ifdef CORPUSLM_HAVE_AVX2_BUILD
    case Backend::avx2: return avx2::window_hash_scan(data, window, out);
#endif
    default: return scalar::window_hash_scan(data, window, out);
  }
}

double sum_f64(std::span<const double> x) {
  switch (active()) {
#ifdef CORPUSLM_HAVE_AVX2_BUILD
    case Backend::avx2: return avx2::sum_f64(x);
#endif
#ifdef CORPUSLM_HAVE_NEON_BUILD
    case Backend::neon: return neon::sum_f64(x);
#endif
    default: return scalar::sum_f64(x);
  }
}

}  // namespace corpuslm::kernels
