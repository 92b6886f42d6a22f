#include "corpuslm/unicode.hpp"

#include <algorithm>

#include "corpuslm/kernels.hpp"

namespace corpuslm::unicode {

namespace {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

bool is_hangul_syllable(char32_t cp) {
  return cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount;
}

const detail::DecompEntry* find_decomp(char32_t cp) {
  const auto* begin = detail::kDecomp;
  const auto* end = detail::kDecomp + detail::kDecompCount;
  const auto* it = std::lower_bound(
      begin, end, cp,
      [](const detail::DecompEntry& e, char32_t c) { return e.cp < c; });
  return (it != end && it->cp == cp) ? it : nullptr;
}

char32_t find_composite(char32_t a, char32_t b) {
  // Hangul LV and LVT composition is algorithmic.
  if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount &&
      b >= kHangulVBase && b < kHangulVBase + kHangulVCount) {
    const int l = static_cast<int>(a - kHangulLBase);
    const int v = static_cast<int>(b - kHangulVBase);
    return kHangulSBase + (l * kHangulVCount + v) * kHangulTCount;
  }
  if (is_hangul_syllable(a) && (a - kHangulSBase) % kHangulTCount == 0 &&
      b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
    return a + (b - kHangulTBase);
  }
  const std::uint64_t key =
      (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  const auto* begin = detail::kComp;
  const auto* end = detail::kComp + detail::kCompCount;
  const auto* it = std::lower_bound(
      begin, end, key,
      [](const detail::CompEntry& e, std::uint64_t k) { return e.pair < k; });
  return (it != end && it->pair == key) ? it->composite : 0;
}

void decompose_append(char32_t cp, std::vector<char32_t>& out) {
  if (is_hangul_syllable(cp)) {
    const int s = static_cast<int>(cp - kHangulSBase);
    out.push_back(kHangulLBase + s / kHangulNCount);
    out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
    if (s % kHangulTCount != 0) out.push_back(kHangulTBase + s % kHangulTCount);
    return;
  }
  if (const auto* e = find_decomp(cp)) {
    for (std::uint32_t k = 0; k < e->length; ++k) {
      out.push_back(detail::kDecompSeq[e->offset + k]);
    }
    return;
  }
  out.push_back(cp);
}

// Stable sort of nonzero-ccc runs (canonical ordering, UAX #15 D108).
void canonical_order(std::vector<char32_t>& cps) {
  std::size_t i = 0;
  while (i < cps.size()) {
    if (detail::combining_class(cps[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && detail::combining_class(cps[j]) != 0) ++j;
    std::stable_sort(cps.begin() + static_cast<std::ptrdiff_t>(i),
                     cps.begin() + static_cast<std::ptrdiff_t>(j),
                     [](char32_t a, char32_t b) {
                       return detail::combining_class(a) <
                              detail::combining_class(b);
                     });
    i = j;
  }
}

std::vector<char32_t> compose(const std::vector<char32_t>& cps) {
  std::vector<char32_t> out;
  out.reserve(cps.size());
  std::ptrdiff_t starter = -1;  // index into out of the last starter
  std::uint8_t last_cc = 255;   // ccc of the last appended char since starter
  for (char32_t cp : cps) {
    const std::uint8_t cc = detail::combining_class(cp);
    if (starter >= 0 && (last_cc == 0 || last_cc < cc)) {
      if (const char32_t comp = find_composite(out[starter], cp)) {
        out[starter] = comp;
        continue;
      }
    }
    if (cc == 0) {
      starter = static_cast<std::ptrdiff_t>(out.size());
      last_cc = 0;
    } else {
      last_cc = cc;
    }
    out.push_back(cp);
  }
  return out;
}

}  // namespace

namespace detail {

std::uint8_t combining_class(char32_t cp) {
  const auto* begin = kCcc;
  const auto* end = kCcc + kCccCount;
  const auto* it = std::lower_bound(
      begin, end, cp, [](const CccEntry& e, char32_t c) { return e.cp < c; });
  return (it != end && it->cp == cp) ? it->ccc : 0;
}

}  // namespace detail

char32_t decode_next(std::string_view data, std::size_t& pos) {
  const auto b0 = static_cast<std::uint8_t>(data[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  std::size_t len = 2;
  char32_t cp = b0 & 0x1F;
  if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  }
  for (std::size_t k = 1; k < len; ++k) {
    cp = (cp << 6) | (static_cast<std::uint8_t>(data[pos + k]) & 0x3F);
  }
  pos += len;
  return cp;
}

std::vector<char32_t> decode(std::string_view utf8) {
  std::vector<char32_t> out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) out.push_back(decode_next(utf8, pos));
  return out;
}

void encode_append(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) encode_append(cp, out);
  return out;
}

std::size_t codepoint_count(std::string_view utf8) {
  return kernels::count_codepoints(
      {reinterpret_cast<const std::uint8_t*>(utf8.data()), utf8.size()});
}

std::string nfc(std::string_view utf8) {
  std::vector<char32_t> decomposed;
  decomposed.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    decompose_append(decode_next(utf8, pos), decomposed);
  }
  canonical_order(decomposed);
  return encode(compose(decomposed));
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::string normalize_line(std::string_view line) {
  return nfc(trim(line));
}

}  // namespace corpuslm::unicode
