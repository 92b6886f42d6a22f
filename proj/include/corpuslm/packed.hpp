#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpuslm/bpe.hpp"

namespace corpuslm {

// Tokenized corpus stored as fixed-length records of token ids.
struct PackedDataset {
  std::uint16_t seq_len = 512;
  std::vector<std::uint32_t> ids;  // record_count() * seq_len entries

  // Byte total of the de-tokenized records; never exceeds the raw input
  // bytes since truncation only drops content.
  std::uint64_t detok_bytes = 0;
  std::uint64_t total_tokens = 0;      // tokens before truncation
  std::uint64_t truncated_tokens = 0;  // trailing tokens dropped

  std::size_t record_count() const {
    return seq_len == 0 ? 0 : ids.size() / seq_len;
  }
  std::span<const std::uint32_t> record(std::size_t r) const {
    return {ids.data() + r * seq_len, seq_len};
  }
};

// Concatenates the token streams of consecutive lines into seq_len-token
// records; a trailing partial record is dropped and accounted as truncated.
PackedDataset pack_sequences(const std::vector<std::string_view>& lines,
                             const SubwordVocab& vocab,
                             std::uint16_t seq_len = 512);

// Binary format: magic "GFTK", version u16 LE, seq_len u16 LE, record count
// u64 LE, then token ids as u32 LE.
std::string serialize_packed(const PackedDataset& ds);
// Byte statistics are not stored; call recompute_stats with the matching
// vocabulary after loading.
PackedDataset parse_packed(std::string_view content);
void recompute_stats(PackedDataset& ds, const SubwordVocab& vocab);

struct TierSample {
  PackedDataset data;
  // False when the dataset cannot fill the requested tier; data then holds
  // every record (the `full` fallback).
  bool available = true;
};

// Seed-shuffles the records and keeps the longest prefix whose de-tokenized
// bytes stay within floor(raw_budget(tier_scaled_bytes, b)). Under a fixed
// seed a smaller tier's selection is a prefix of a larger tier's.
TierSample sample_tier(const PackedDataset& ds, std::uint64_t tier_scaled_bytes,
                       double b, std::uint64_t seed, const SubwordVocab& vocab);

}  // namespace corpuslm
