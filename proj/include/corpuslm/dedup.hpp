#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "corpuslm/common.hpp"

namespace corpuslm {

class Utf8Error : public Error {
 public:
  Utf8Error(std::size_t offset, const std::string& context)
      : Error("invalid UTF-8 at byte " + std::to_string(offset) +
              (context.empty() ? "" : " in " + context)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

inline constexpr std::size_t kDedupWindow = 100;

// Removes repeated fixed-size byte windows: in the result no two distinct
// positions start identical `window`-byte spans. The first occurrence of a
// duplicated span is kept; removal covers the maximal duplicated span and is
// shrunk to UTF-8 codepoint boundaries, so valid input yields valid output.
// Runs duplicate-detection passes to a fixed point, which makes the
// operation idempotent even when a removal seam creates a fresh duplicate.
// Throws Utf8Error (with byte offset) on invalid input.
std::string dedup_bytes(std::string_view text, std::size_t window = kDedupWindow);

}  // namespace corpuslm
