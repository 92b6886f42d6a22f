#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpuslm/packed.hpp"

namespace corpuslm {

inline constexpr double kDefaultBackoffPenalty = 0.40;

// Bigram counts with stupid backoff scoring. Scores are probability-like
// values in (0, 1] and are deliberately not renormalized.
class BigramModel {
 public:
  std::uint32_t vocab_size() const { return vocab_size_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  double lambda() const { return lambda_; }
  std::uint64_t unigram_count(std::uint32_t id) const;
  std::uint64_t bigram_count(std::uint32_t prev, std::uint32_t next) const;

  // bigram MLE when the pair was observed, else lambda times the unigram
  // probability, with 1/v standing in for zero-count tokens.
  double score_next(std::uint32_t prev, std::uint32_t next) const;

  // Natural-log score of the continuation, conditioning on context_last and
  // advancing through the continuation tokens. Always finite.
  double sequence_logprob(std::uint32_t context_last,
                          std::span<const std::uint32_t> continuation) const;

  // Binary format: magic "GFBG", version u16 LE, v u32 LE, N u64 LE,
  // lambda f64 LE, unigram table (v x u64 LE), then (u32 prev, u32 next,
  // u64 count) triples sorted by (prev, next).
  std::string serialize() const;
  static BigramModel deserialize(std::string_view content);

  friend BigramModel train_bigram(const PackedDataset&, std::uint32_t,
                                  double);

 private:
  std::uint32_t vocab_size_ = 0;
  std::uint64_t total_tokens_ = 0;
  double lambda_ = kDefaultBackoffPenalty;
  std::vector<std::uint64_t> unigram_;
  std::unordered_map<std::uint64_t, std::uint64_t> bigram_;
};

// Counts adjacent pairs within each record only; records never chain and no
// begin-of-sequence token is injected. Throws Error on an empty dataset.
BigramModel train_bigram(const PackedDataset& packed, std::uint32_t vocab_size,
                         double lambda = kDefaultBackoffPenalty);

}  // namespace corpuslm
