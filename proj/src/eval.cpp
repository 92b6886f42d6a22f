#include "corpuslm/eval.hpp"

#include <cmath>
#include <iostream>
#include <set>
#include <tuple>

#include "corpuslm/common.hpp"
#include "corpuslm/kernels.hpp"
#include "corpuslm/unicode.hpp"

namespace corpuslm {

std::vector<EvalSequence> parse_eval_corpus(std::string_view text) {
  std::vector<EvalSequence> corpus;
  std::uint64_t seq_id = 0;
  for (std::string_view line : split_lines(text)) {
    corpus.push_back({seq_id++, std::string(line)});
  }
  return corpus;
}

std::optional<HalfSplit> half_split(
    std::string_view text, std::span<const std::size_t> token_char_lengths) {
  const std::size_t tokens = token_char_lengths.size();
  if (tokens < 2) return std::nullopt;

  std::size_t total_chars = 0;
  for (std::size_t len : token_char_lengths) total_chars += len;
  const double midpoint = static_cast<double>(total_chars) / 2.0;

  // Candidate boundaries sit after token k, k in [1, tokens); both halves
  // must be non-empty in tokens.
  std::size_t best_k = 1;
  std::size_t cum = token_char_lengths[0];
  double best_dist = std::abs(static_cast<double>(cum) - midpoint);
  std::size_t running = cum;
  for (std::size_t k = 2; k < tokens; ++k) {
    running += token_char_lengths[k - 1];
    const double dist = std::abs(static_cast<double>(running) - midpoint);
    if (dist < best_dist) {
      best_dist = dist;
      best_k = k;
      cum = running;
    }
  }

  // Split the raw text at the chosen character offset.
  HalfSplit split;
  split.boundary_tokens = best_k;
  std::size_t pos = 0;
  for (std::size_t c = 0; c < cum; ++c) unicode::decode_next(text, pos);
  split.s0 = std::string(text.substr(0, pos));
  split.s1 = std::string(text.substr(pos));
  return split;
}

std::vector<TokenLogProb> unk_adjust(std::vector<TokenLogProb> entries,
                                     std::uint32_t v) {
  if (v == 0) throw Error("unk_adjust: vocabulary size must be positive");
  const double unk_logprob = std::log(1.0 / static_cast<double>(v));
  for (auto& e : entries) {
    if (e.is_unk) e.logprob = unk_logprob;
  }
  return entries;
}

EvalRecord log_perplexity(const std::vector<SequenceScore>& scores) {
  if (scores.empty()) throw Error("log_perplexity: no scores");
  std::vector<double> negatives;
  negatives.reserve(scores.size());
  for (const auto& s : scores) {
    if (s.model_id != scores.front().model_id ||
        s.language != scores.front().language) {
      throw Error("log_perplexity: mixed (model, language) keys");
    }
    negatives.push_back(-s.logprob);
  }
  EvalRecord record;
  record.model_id = scores.front().model_id;
  record.language = scores.front().language;
  record.n_sequences = scores.size();
  record.log_ppl =
      kernels::sum_f64(negatives) / static_cast<double>(scores.size());
  return record;
}

BigramEvalResult eval_bigram(const BigramModel& model,
                             const SubwordVocab& vocab,
                             const std::vector<EvalSequence>& corpus,
                             std::string_view model_id,
                             std::string_view language) {
  if (vocab.size() != model.vocab_size()) {
    throw Error("eval_bigram: vocabulary size " + std::to_string(vocab.size()) +
                " does not match model v=" +
                std::to_string(model.vocab_size()));
  }
  BigramEvalResult result;
  std::uint64_t skipped = 0;
  for (const auto& seq : corpus) {
    const std::vector<std::uint32_t> ids = vocab.encode(seq.text);
    std::vector<std::size_t> char_lens;
    char_lens.reserve(ids.size());
    for (std::uint32_t id : ids) {
      char_lens.push_back(vocab.token_char_length(id));
    }
    const auto split = half_split(seq.text, char_lens);
    if (!split) {
      ++skipped;
      continue;
    }
    std::vector<TokenLogProb> tokens;
    tokens.reserve(ids.size() - split->boundary_tokens);
    std::uint32_t prev = ids[split->boundary_tokens - 1];
    for (std::size_t i = split->boundary_tokens; i < ids.size(); ++i) {
      TokenLogProb t;
      t.token = ids[i];
      t.logprob = std::log(model.score_next(prev, ids[i]));
      t.is_unk = ids[i] == vocab.unk_id();
      tokens.push_back(t);
      prev = ids[i];
    }
    tokens = unk_adjust(std::move(tokens), model.vocab_size());
    std::vector<double> logprobs;
    logprobs.reserve(tokens.size());
    for (const auto& t : tokens) logprobs.push_back(t.logprob);

    SequenceScore score;
    score.model_id = std::string(model_id);
    score.language = std::string(language);
    score.seq_id = seq.seq_id;
    score.logprob = kernels::sum_f64(logprobs);
    result.scores.push_back(std::move(score));
  }
  if (result.scores.empty()) {
    throw Error("eval_bigram: no scoreable sequences (" +
                std::to_string(skipped) + " skipped)");
  }
  result.record = log_perplexity(result.scores);
  result.record.n_skipped = skipped;
  return result;
}

std::string write_scores_tsv(const std::vector<SequenceScore>& scores) {
  std::string out;
  for (const auto& s : scores) {
    out += s.model_id;
    out += '\t';
    out += s.language;
    out += '\t';
    out += std::to_string(s.seq_id);
    out += '\t';
    out += format_double(s.logprob);
    out += '\n';
  }
  return out;
}

std::vector<SequenceScore> ingest_external_scores(std::string_view tsv,
                                                  std::size_t* rejected) {
  std::vector<SequenceScore> scores;
  std::set<std::tuple<std::string, std::string, std::uint64_t>> seen;
  std::size_t rejected_count = 0;
  const auto lines = split_lines(tsv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], '\t');
    if (fields.size() != 4) {
      throw Error("score file: expected 4 tab-separated fields at line " +
                  std::to_string(i + 1));
    }
    SequenceScore s;
    s.model_id = std::string(fields[0]);
    s.language = std::string(fields[1]);
    s.seq_id = static_cast<std::uint64_t>(parse_int(fields[2], i + 1));
    s.logprob = parse_double(fields[3], i + 1);
    if (!std::isfinite(s.logprob)) {
      throw Error("score file: non-finite logprob at line " +
                  std::to_string(i + 1));
    }
    if (!seen.emplace(s.model_id, s.language, s.seq_id).second) {
      throw Error("score file: duplicate (model, language, seq_id) at line " +
                  std::to_string(i + 1));
    }
    if (s.logprob > 0.0) {
      // Positive log-likelihoods can only arise from length-0 suffixes,
      // which are not scoreable; drop the row.
      std::cerr << "warning: rejecting positive logprob at line " << (i + 1)
                << "\n";
      ++rejected_count;
      continue;
    }
    scores.push_back(std::move(s));
  }
  if (rejected) *rejected = rejected_count;
  return scores;
}

std::size_t multiple_choice(std::span<const double> option_logprobs) {
  if (option_logprobs.size() < 2) {
    throw Error("multiple_choice: need at least 2 options");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < option_logprobs.size(); ++i) {
    if (option_logprobs[i] > option_logprobs[best]) best = i;
  }
  return best;
}

double mc_accuracy(std::span<const std::size_t> chosen,
                   std::span<const std::size_t> gold) {
  if (chosen.size() != gold.size()) {
    throw Error("mc_accuracy: chosen/gold size mismatch");
  }
  if (chosen.empty()) throw Error("mc_accuracy: no questions");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    correct += chosen[i] == gold[i];
  }
  return static_cast<double>(correct) / static_cast<double>(chosen.size());
}

}  // namespace corpuslm
