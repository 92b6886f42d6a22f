#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "corpuslm/kernels.hpp"

using namespace corpuslm;

namespace {

bool avx2_available() {
#ifdef CORPUSLM_HAVE_AVX2_BUILD
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n,
                                       int hi = 255) {
  std::vector<std::uint8_t> out(n);
  std::uniform_int_distribution<int> dist(0, hi);
  for (auto& b : out) b = static_cast<std::uint8_t>(dist(rng));
  return out;
}

// Independent oracle: direct polynomial evaluation per window.
std::uint64_t horner_hash(const std::uint8_t* p, std::size_t window) {
  std::uint64_t h = 0;
  for (std::size_t k = 0; k < window; ++k) {
    h = h * kernels::detail::kHashBase + p[k];
  }
  return h;
}

}  // namespace

TEST_CASE("count_codepoints scalar on known strings") {
  const std::string s = "a\xC3\xA9\xE6\x97\xA5\xF0\x9F\x99\x82";  // a é 日 🙂
  CHECK(kernels::scalar::count_codepoints(
            {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}) == 4);
  CHECK(kernels::scalar::count_codepoints({}) == 0);
}

TEST_CASE("utf8_validate scalar accepts valid and pinpoints invalid") {
  const auto validate = [](const std::string& s) {
    return kernels::scalar::utf8_validate(
        {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  };
  CHECK(validate("") == kernels::npos);
  CHECK(validate("plain ascii") == kernels::npos);
  CHECK(validate("caf\xC3\xA9 \xE6\x97\xA5 \xF0\x9F\x99\x82") ==
        kernels::npos);
  CHECK(validate("ab\x80") == 2);                    // stray continuation
  CHECK(validate("ab\xC3") == 2);                    // truncated
  CHECK(validate("\xC0\xAF") == 0);                  // overlong
  CHECK(validate("\xE0\x80\xAF") == 0);              // overlong
  CHECK(validate("\xED\xA0\x80") == 0);              // surrogate
  CHECK(validate("\xF4\x90\x80\x80") == 0);          // beyond U+10FFFF
  CHECK(validate("ok\xFFrest") == 2);                // 0xFF never valid
}

TEST_CASE("window_hash_scan scalar matches the direct polynomial oracle") {
  std::mt19937_64 rng(7);
  for (const std::size_t n : {5, 21, 100, 101, 257, 1000}) {
    for (const std::size_t window : {4, 16, 100}) {
      if (n < window) continue;
      const auto data = random_bytes(rng, n);
      std::vector<std::uint64_t> out(n - window + 1);
      kernels::scalar::window_hash_scan(data, window, out);
      for (std::size_t i = 0; i < out.size(); ++i) {
        REQUIRE(out[i] == horner_hash(data.data() + i, window));
      }
    }
  }
}

TEST_CASE("sum_f64 scalar follows the documented fixed order") {
  const std::vector<double> x{1e16, 1.0, -1e16, 2.0, 3.0, 4.0, 5.0};
  // stripes: s0=1e16+3, s1=1+4, s2=-1e16+5, s3=2; tail: none (7 elems ->
  // one full block of 4, tail 3 appended in order after combining)
  double s0 = x[0], s1 = x[1], s2 = x[2], s3 = x[3];
  double expect = (s0 + s2) + (s1 + s3);
  expect += x[4];
  expect += x[5];
  expect += x[6];
  CHECK(kernels::scalar::sum_f64(x) == expect);
}

#ifdef CORPUSLM_HAVE_AVX2_BUILD

TEST_CASE("avx2 variants are bit-identical to scalar") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available at runtime; skipping equivalence");
    return;
  }
  std::mt19937_64 rng(42);

  SUBCASE("count_codepoints") {
    for (int iter = 0; iter < 200; ++iter) {
      const auto n = static_cast<std::size_t>(rng() % 400);
      const auto data = random_bytes(rng, n);
      CHECK(kernels::avx2::count_codepoints(data) ==
            kernels::scalar::count_codepoints(data));
    }
  }

  SUBCASE("utf8_validate on random bytes and on valid text") {
    for (int iter = 0; iter < 300; ++iter) {
      const auto n = static_cast<std::size_t>(rng() % 300);
      // Mixed: mostly ASCII with occasional high bytes to hit both paths.
      auto data = random_bytes(rng, n, 127);
      for (auto& b : data) {
        if (rng() % 16 == 0) b = static_cast<std::uint8_t>(rng() % 256);
      }
      CHECK(kernels::avx2::utf8_validate(data) ==
            kernels::scalar::utf8_validate(data));
    }
  }

  SUBCASE("window_hash_scan across sizes including the SIMD tail") {
    for (const std::size_t n :
         {100, 101, 107, 115, 116, 128, 200, 1000, 4096, 65536}) {
      const auto data = random_bytes(rng, n);
      for (const std::size_t window : {4, 100}) {
        if (n < window) continue;
        std::vector<std::uint64_t> a(n - window + 1), b(n - window + 1);
        kernels::scalar::window_hash_scan(data, window, a);
        kernels::avx2::window_hash_scan(data, window, b);
        REQUIRE(a == b);
      }
    }
  }

  SUBCASE("sum_f64 bit-identical") {
    std::uniform_real_distribution<double> dist(-1e9, 1e9);
    for (int iter = 0; iter < 200; ++iter) {
      const auto n = static_cast<std::size_t>(rng() % 1000);
      std::vector<double> x(n);
      for (auto& v : x) v = dist(rng);
      CHECK(kernels::avx2::sum_f64(x) == kernels::scalar::sum_f64(x));
    }
  }
}

#endif  // CORPUSLM_HAVE_AVX2_BUILD

TEST_CASE("dispatcher honors CORPUSLM_KERNELS override") {
  // active() caches; just confirm it reports a known backend.
  const auto b = kernels::active();
  CHECK((b == kernels::Backend::scalar || b == kernels::Backend::avx2 ||
         b == kernels::Backend::neon));
  CHECK(std::string(kernels::backend_name(b)) != "unknown");
}
