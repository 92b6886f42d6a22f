#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpuslm/bigram.hpp"
#include "corpuslm/bpe.hpp"

namespace corpuslm {

struct EvalSequence {
  std::uint64_t seq_id = 0;
  std::string text;
};

// One sequence per line; seq_id is the 0-based line number.
std::vector<EvalSequence> parse_eval_corpus(std::string_view text);

struct SequenceScore {
  std::string model_id;
  std::string language;
  std::uint64_t seq_id = 0;
  double logprob = 0.0;  // natural log of P(s1 | s0)
};

struct EvalRecord {
  std::string language;
  std::string model_id;
  double log_ppl = 0.0;
  std::uint64_t n_sequences = 0;
  std::uint64_t n_skipped = 0;
};

struct HalfSplit {
  std::size_t boundary_tokens = 0;  // tokens in s0
  std::string s0, s1;
};

// Splits at the token boundary whose cumulative character offset is nearest
// the character midpoint; exact ties take the earlier boundary. Returns
// nullopt (Unsplittable) for fewer than two tokens.
std::optional<HalfSplit> half_split(
    std::string_view text, std::span<const std::size_t> token_char_lengths);

struct TokenLogProb {
  std::uint32_t token = 0;
  double logprob = 0.0;
  bool is_unk = false;
};

// Replaces every unk entry's logprob with ln(1/v).
std::vector<TokenLogProb> unk_adjust(std::vector<TokenLogProb> entries,
                                     std::uint32_t v);

// Arithmetic mean of the negative logprobs (Eq. of the half-split protocol).
// All scores must share one (model, language); throws on empty input.
EvalRecord log_perplexity(const std::vector<SequenceScore>& scores);

struct BigramEvalResult {
  EvalRecord record;
  std::vector<SequenceScore> scores;
};

// encode -> half_split -> per-token stupid-backoff scores -> unk_adjust ->
// arithmetic mean. Sequences with fewer than two tokens are skipped and
// counted. Throws when the vocabulary size disagrees with the model or no
// sequence is scoreable.
BigramEvalResult eval_bigram(const BigramModel& model,
                             const SubwordVocab& vocab,
                             const std::vector<EvalSequence>& corpus,
                             std::string_view model_id,
                             std::string_view language);

// Score file: TSV "model_id<TAB>language<TAB>seq_id<TAB>logprob", no header.
std::string write_scores_tsv(const std::vector<SequenceScore>& scores);

// Parses and validates a score file. Duplicate (model, language, seq_id)
// keys and non-numeric fields are errors with line numbers; positive
// logprobs (possible only for empty suffixes) are rejected with a warning
// counted in `rejected`.
std::vector<SequenceScore> ingest_external_scores(std::string_view tsv,
                                                  std::size_t* rejected =
                                                      nullptr);

// Argmax over option logprobs; ties resolve to the lowest index.
std::size_t multiple_choice(std::span<const double> option_logprobs);

double mc_accuracy(std::span<const std::size_t> chosen,
                   std::span<const std::size_t> gold);

}  // namespace corpuslm
