#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace corpuslm::unicode {

// Decodes one UTF-8 sequence starting at data[pos]. Returns the scalar and
// advances pos. Input must be valid UTF-8 (see kernels::utf8_validate).
char32_t decode_next(std::string_view data, std::size_t& pos);

// Full decode / encode between UTF-8 and Unicode scalars.
std::vector<char32_t> decode(std::string_view utf8);
void encode_append(char32_t cp, std::string& out);
std::string encode(const std::vector<char32_t>& cps);

std::size_t codepoint_count(std::string_view utf8);

// Canonical composition (NFC) per UAX #15, backed by tables generated from
// the Unicode character database (tools/gen_unicode_tables.py).
std::string nfc(std::string_view utf8);

// ASCII whitespace trim on both ends.
std::string_view trim(std::string_view s);

// trim + NFC; the normal form used for holdout membership tests.
std::string normalize_line(std::string_view line);

namespace detail {

struct DecompEntry {
  char32_t cp;
  std::uint32_t offset;
  std::uint32_t length;
};
struct CccEntry {
  char32_t cp;
  std::uint8_t ccc;
};
struct CompEntry {
  std::uint64_t pair;  // (first << 32) | second
  char32_t composite;
};

extern const DecompEntry kDecomp[];
extern const std::size_t kDecompCount;
extern const char32_t kDecompSeq[];
extern const CccEntry kCcc[];
extern const std::size_t kCccCount;
extern const CompEntry kComp[];
extern const std::size_t kCompCount;

std::uint8_t combining_class(char32_t cp);

}  // namespace detail

}  // namespace corpuslm::unicode
