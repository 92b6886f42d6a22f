#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>
#include <string>

#include "corpuslm/dedup.hpp"
#include "corpuslm/kernels.hpp"

using namespace corpuslm;

namespace {

// Independent duplicate-window detector. All-pairs for small inputs; a
// lexicographic sort of window views (no hashing) for larger ones. The two
// routes are cross-checked against each other below.
bool has_duplicate_window_bruteforce(std::string_view s, std::size_t w) {
  if (s.size() < w + 1) return false;
  for (std::size_t i = 0; i + w <= s.size(); ++i) {
    for (std::size_t j = i + 1; j + w <= s.size(); ++j) {
      if (std::memcmp(s.data() + i, s.data() + j, w) == 0) return true;
    }
  }
  return false;
}

bool has_duplicate_window_sorted(std::string_view s, std::size_t w) {
  if (s.size() < w + 1) return false;
  const std::size_t m = s.size() - w + 1;
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::memcmp(s.data() + a, s.data() + b, w) < 0;
  });
  for (std::size_t k = 1; k < m; ++k) {
    if (std::memcmp(s.data() + idx[k - 1], s.data() + idx[k], w) == 0) {
      return true;
    }
  }
  return false;
}

bool oracle_has_duplicate(std::string_view s, std::size_t w) {
  return s.size() <= 4096 ? has_duplicate_window_bruteforce(s, w)
                          : has_duplicate_window_sorted(s, w);
}

bool valid_utf8(std::string_view s) {
  return kernels::scalar::utf8_validate(
             {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}) ==
         kernels::npos;
}

std::string random_ascii(std::mt19937_64& rng, std::size_t n) {
  std::string out(n, ' ');
  for (auto& c : out) c = static_cast<char>('a' + rng() % 26);
  return out;
}

// Random multi-script text: ASCII, Cyrillic, CJK, and emoji runs.
std::string random_multiscript(std::mt19937_64& rng, std::size_t approx) {
  std::string out;
  while (out.size() < approx) {
    const int script = static_cast<int>(rng() % 4);
    const int run = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < run; ++i) {
      switch (script) {
        case 0: out.push_back(static_cast<char>('a' + rng() % 26)); break;
        case 1: {  // Cyrillic а..я
          const char32_t cp = 0x430 + rng() % 32;
          out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
          out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
          break;
        }
        case 2: {  // CJK
          const char32_t cp = 0x4E00 + rng() % 0x100;
          out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
          break;
        }
        default: {  // emoji block
          const char32_t cp = 0x1F600 + rng() % 0x30;
          out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
          break;
        }
      }
    }
    if (rng() % 4 == 0) out.push_back('\n');
  }
  return out;
}

// Plants duplicated blocks inside otherwise-random text.
std::string fixture_with_duplicates(std::mt19937_64& rng, std::size_t approx) {
  std::string base = random_multiscript(rng, approx);
  const int plants = 1 + static_cast<int>(rng() % 5);
  for (int p = 0; p < plants && base.size() > 400; ++p) {
    // Copy a slice to another location, snapping to nothing in particular;
    // dedup must handle copies landing mid-codepoint-free since the source
    // is re-inserted as-is.
    const std::size_t len = 120 + rng() % 400;
    std::size_t from = rng() % (base.size() - len);
    std::size_t to = rng() % base.size();
    // Snap both to codepoint boundaries to keep the fixture valid UTF-8.
    while (from < base.size() &&
           (static_cast<unsigned char>(base[from]) & 0xC0) == 0x80) {
      ++from;
    }
    std::size_t end = std::min(from + len, base.size());
    while (end < base.size() &&
           (static_cast<unsigned char>(base[end]) & 0xC0) == 0x80) {
      ++end;
    }
    while (to < base.size() &&
           (static_cast<unsigned char>(base[to]) & 0xC0) == 0x80) {
      ++to;
    }
    base.insert(to, base.substr(from, end - from));
  }
  return base;
}

}  // namespace

TEST_CASE("oracle routes agree on small inputs") {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 40; ++iter) {
    std::string s = random_ascii(rng, 200 + rng() % 600);
    if (iter % 2 == 0) {
      const std::size_t from = rng() % (s.size() / 2);
      s += s.substr(from, 150);
    }
    CHECK(has_duplicate_window_bruteforce(s, 100) ==
          has_duplicate_window_sorted(s, 100));
  }
}

TEST_CASE("input with all windows distinct is unchanged") {
  std::mt19937_64 rng(1);
  const std::string s = random_ascii(rng, 3000);
  if (!oracle_has_duplicate(s, 100)) {
    CHECK(dedup_bytes(s) == s);
  }
  // Deterministic distinct-window input: counting in decimal.
  std::string counting;
  for (int i = 0; i < 400; ++i) counting += std::to_string(i) + ",";
  REQUIRE_FALSE(oracle_has_duplicate(counting, 100));
  CHECK(dedup_bytes(counting) == counting);
}

TEST_CASE("A ++ B ++ A keeps the first copy and strips the repeat") {
  std::mt19937_64 rng(2);
  const std::string a = random_ascii(rng, 150);
  std::string b = random_ascii(rng, 500);
  const std::string input = a + b + a;
  REQUIRE(oracle_has_duplicate(input, 100));
  const std::string out = dedup_bytes(input);
  // First copy survives with B; at most a sub-window residue of the second
  // copy remains.
  CHECK(out.substr(0, a.size()) == a);
  CHECK(out.size() >= a.size() + b.size() - 100);
  CHECK(out.size() <= a.size() + b.size() + 49);
  CHECK_FALSE(oracle_has_duplicate(out, 100));
}

TEST_CASE("two copies of a 99-byte string are below threshold: unchanged") {
  std::mt19937_64 rng(4);
  const std::string copy = random_ascii(rng, 99);
  std::string unique;
  for (int i = 0; i < 60; ++i) unique += std::to_string(i) + "#";
  const std::string input = copy + unique + copy;
  REQUIRE_FALSE(oracle_has_duplicate(input, 100));
  CHECK(dedup_bytes(input) == input);
}

TEST_CASE("invalid UTF-8 reports the byte offset") {
  try {
    dedup_bytes("abc\x80xyz");
    FAIL("expected Utf8Error");
  } catch (const Utf8Error& e) {
    CHECK(e.offset() == 3);
  }
  try {
    dedup_bytes(std::string(200, 'q') + "\xF0\x9F\x99");  // truncated emoji
    FAIL("expected Utf8Error");
  } catch (const Utf8Error& e) {
    CHECK(e.offset() == 200);
  }
}

TEST_CASE("removal boundaries shrink to codepoint boundaries") {
  std::mt19937_64 rng(5);
  // Duplicated multi-byte blocks placed so windows start mid-codepoint.
  std::string block;
  for (int i = 0; i < 60; ++i) {
    block += "\xE6\x97\xA5";  // CJK
    block += static_cast<char>('a' + (i % 26));
  }
  const std::string input =
      block + random_multiscript(rng, 700) + block + "\xE6\x97\xA5tail";
  REQUIRE(valid_utf8(input));
  const std::string out = dedup_bytes(input);
  CHECK(valid_utf8(out));
  CHECK_FALSE(oracle_has_duplicate(out, 100));
}

TEST_CASE("dedup output is clean and idempotent on randomized fixtures") {
  std::mt19937_64 rng(1234);
  for (int iter = 0; iter < 30; ++iter) {
    const std::string input = fixture_with_duplicates(rng, 2000 + rng() % 6000);
    REQUIRE(valid_utf8(input));
    const std::string out = dedup_bytes(input);
    CHECK(valid_utf8(out));
    CHECK_FALSE(oracle_has_duplicate(out, 100));
    CHECK(dedup_bytes(out) == out);
  }
}

TEST_CASE("pathological periodic input collapses") {
  // Period-50 text: every window repeats 50 bytes later.
  std::mt19937_64 rng(9);
  const std::string p = random_ascii(rng, 50);
  std::string input;
  for (int i = 0; i < 12; ++i) input += p;
  const std::string out = dedup_bytes(input);
  CHECK_FALSE(oracle_has_duplicate(out, 100));
  CHECK(dedup_bytes(out) == out);
  CHECK(out.substr(0, std::min<std::size_t>(out.size(), 50)) ==
        p.substr(0, std::min<std::size_t>(out.size(), 50)));
}

TEST_CASE("seam-created duplicates are caught by the fixed point") {
  std::mt19937_64 rng(31);
  // C D1 C D2 E with D1+D2 forming a window that also appears in E.
  const std::string c = random_ascii(rng, 150);
  const std::string d1 = random_ascii(rng, 60);
  const std::string d2 = random_ascii(rng, 60);
  const std::string seam = d1 + d2;
  const std::string input = c + d1 + c + d2 + "斷" + seam + random_ascii(rng, 300);
  const std::string out = dedup_bytes(input);
  CHECK(valid_utf8(out));
  CHECK_FALSE(oracle_has_duplicate(out, 100));
  CHECK(dedup_bytes(out) == out);
}

TEST_CASE("smaller windows work on ASCII for quick checks") {
  const std::string input = "0123456789abcdefghij0123456789ABCDEF";
  const std::string out = dedup_bytes(input, 10);
  CHECK_FALSE(oracle_has_duplicate(out, 10));
  CHECK(dedup_bytes(out, 10) == out);
}
