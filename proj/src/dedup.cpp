#include "corpuslm/dedup.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <vector>

#include "corpuslm/kernels.hpp"

namespace corpuslm {

namespace {

bool is_boundary(std::string_view s, std::size_t pos) {
  return pos == s.size() ||
         (static_cast<std::uint8_t>(s[pos]) & 0xC0) != 0x80;
}

std::size_t next_boundary(std::string_view s, std::size_t pos) {
  while (!is_boundary(s, pos)) ++pos;
  return pos;
}

std::size_t prev_boundary(std::string_view s, std::size_t pos) {
  while (!is_boundary(s, pos)) --pos;
  return pos;
}

// One detection pass: every window that repeats an earlier identical window
// is marked, marked spans are merged into intervals, interval edges are
// shrunk to codepoint boundaries, and the buffer is rewritten. Returns
// whether anything was removed.
bool dedup_pass(std::string& buf, std::size_t window) {
  const std::size_t n = buf.size();
  if (n < window + 1) return false;
  const std::size_t m = n - window + 1;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(buf.data());

  std::vector<std::uint64_t> hashes(m);
  kernels::window_hash_scan({bytes, n}, window, hashes);

  // Group windows by content: order by hash, verify ties byte-wise, break
  // remaining ties by position so each group lists occurrences in order.
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  const char* data = buf.data();
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (hashes[a] != hashes[b]) return hashes[a] < hashes[b];
    const int c = std::memcmp(data + a, data + b, window);
    if (c != 0) return c < 0;
    return a < b;
  });

  std::vector<std::uint32_t> marks;
  for (std::size_t k = 1; k < m; ++k) {
    const std::uint32_t prev = idx[k - 1], cur = idx[k];
    if (hashes[prev] == hashes[cur] &&
        std::memcmp(data + prev, data + cur, window) == 0) {
      marks.push_back(cur);  // first occurrence of the run is kept
    }
  }
  if (marks.empty()) return false;
  std::sort(marks.begin(), marks.end());

  std::vector<std::pair<std::size_t, std::size_t>> intervals;
  for (std::uint32_t i : marks) {
    if (!intervals.empty() && i <= intervals.back().second) {
      intervals.back().second = i + window;
    } else {
      intervals.emplace_back(i, i + window);
    }
  }

  std::string out;
  out.reserve(n);
  std::size_t cursor = 0;
  for (auto [a, b] : intervals) {
    a = next_boundary(buf, a);
    b = prev_boundary(buf, b);
    if (a >= b) continue;  // unreachable for window >= 8
    out.append(buf, cursor, a - cursor);
    cursor = b;
  }
  out.append(buf, cursor, n - cursor);
  if (out.size() == n) return false;
  buf = std::move(out);
  return true;
}

}  // namespace

std::string dedup_bytes(std::string_view text, std::size_t window) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const std::size_t bad = kernels::utf8_validate({bytes, text.size()});
  if (bad != kernels::npos) throw Utf8Error(bad, "");

  std::string buf(text);
  // Removal seams can butt two fragments into a fresh duplicate window, so
  // iterate to a fixed point. Each effective pass shortens the buffer, so
  // this terminates; in practice one or two passes suffice.
  while (dedup_pass(buf, window)) {
  }
  return buf;
}

}  // namespace corpuslm
