#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpuslm {

// Word-leading spaces are rewritten to this marker (U+2581) so decoding is
// a pure string reversal; a literal U+2581 in input text encodes to unk.
inline constexpr char32_t kSpaceMarker = 0x2581;

// Greedy pair-merge subword vocabulary. Id 0 is unk; ids [1, 1+alphabet)
// are the single-character base tokens in codepoint order; each merge then
// appends one id in learned order.
class SubwordVocab {
 public:
  std::uint32_t size() const {
    return static_cast<std::uint32_t>(tokens_.size());
  }
  std::uint32_t unk_id() const { return 0; }
  std::uint32_t alphabet_size() const { return alphabet_count_; }
  const std::string& algo() const { return algo_; }
  const std::string& token(std::uint32_t id) const;
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& merges() const {
    return merges_;
  }

  // Characters outside the base alphabet map to unk; merges are applied in
  // learned order. decode inverts encode whenever no unk id is present.
  std::vector<std::uint32_t> encode(std::string_view text) const;
  std::string decode(std::span<const std::uint32_t> ids) const;

  // Characters a token spans in source text (unk spans exactly one).
  std::size_t token_char_length(std::uint32_t id) const;
  // Bytes a token contributes to decoded text (the marker decodes to a
  // one-byte space; unk contributes nothing).
  std::size_t token_byte_length(std::uint32_t id) const;

  // Text format: header "v=<int> unk=<int> algo=<name>", then one line per
  // non-unk token in id order: base tokens as a single field, merges as
  // "left right". Backslash, CR and LF are escaped inside fields.
  std::string serialize() const;
  static SubwordVocab deserialize(std::string_view content);

 private:
  friend SubwordVocab train_vocab(std::string_view, std::uint32_t,
                                  std::uint64_t, double, std::uint64_t);

  void add_base_token(char32_t cp);
  std::uint32_t add_merge(std::uint32_t left, std::uint32_t right);
  void index_token(std::uint32_t id);

  std::vector<std::string> tokens_;  // tokens_[0] == "" (unk)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> merges_;
  std::unordered_map<char32_t, std::uint32_t> alphabet_;
  std::uint32_t alphabet_count_ = 0;
  std::vector<std::size_t> char_len_;
  std::vector<std::size_t> byte_len_;
  std::string algo_ = "bpe";
};

// Trains on at most raw_budget(training_cap_scaled_bytes, byte_premium)
// bytes taken from the head of the seed-shuffled line stream. Most frequent
// pair merges first; ties break lexicographically on the (left, right)
// token strings. Throws Error when vocab_size cannot cover the base
// alphabet plus unk, naming the minimal feasible size.
SubwordVocab train_vocab(std::string_view text, std::uint32_t vocab_size,
                         std::uint64_t training_cap_scaled_bytes,
                         double byte_premium, std::uint64_t seed);

}  // namespace corpuslm
