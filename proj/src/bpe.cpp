#include "corpuslm/bpe.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_set>

#include "corpuslm/byte_premium.hpp"
#include "corpuslm/common.hpp"
#include "corpuslm/unicode.hpp"

namespace corpuslm {

namespace {

// Sentinel for a literal marker character in input text: never a valid
// scalar, so it can only ever resolve to unk.
constexpr char32_t kLiteralMarker = 0x110000;

std::vector<char32_t> transform_text(std::string_view text) {
  std::vector<char32_t> cps;
  cps.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = unicode::decode_next(text, pos);
    if (cp == U' ') {
      cp = kSpaceMarker;
    } else if (cp == kSpaceMarker) {
      cp = kLiteralMarker;
    }
    cps.push_back(cp);
  }
  return cps;
}

// Words are the merge boundaries: a new word starts at every marker.
std::vector<std::u32string> split_words(const std::vector<char32_t>& cps) {
  std::vector<std::u32string> words;
  std::u32string current;
  for (char32_t cp : cps) {
    if (cp == kSpaceMarker && !current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
    current.push_back(cp);
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

constexpr std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct Candidate {
  std::uint64_t count;
  std::string left_str, right_str;
  std::uint32_t left, right;
};

// Max-heap on count; ties prefer the lexicographically smaller pair.
struct CandidateLess {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.count != b.count) return a.count < b.count;
    if (a.left_str != b.left_str) return a.left_str > b.left_str;
    return a.right_str > b.right_str;
  }
};

}  // namespace

const std::string& SubwordVocab::token(std::uint32_t id) const {
  if (id >= tokens_.size()) {
    throw Error("token id " + std::to_string(id) + " out of range (v=" +
                std::to_string(tokens_.size()) + ")");
  }
  return tokens_[id];
}

std::size_t SubwordVocab::token_char_length(std::uint32_t id) const {
  if (id >= char_len_.size()) throw Error("token id out of range");
  return char_len_[id];
}

std::size_t SubwordVocab::token_byte_length(std::uint32_t id) const {
  if (id >= byte_len_.size()) throw Error("token id out of range");
  return byte_len_[id];
}

void SubwordVocab::index_token(std::uint32_t id) {
  const std::string& tok = tokens_[id];
  if (id == unk_id()) {
    char_len_.push_back(1);  // each OOV scalar becomes exactly one unk
    byte_len_.push_back(0);
    return;
  }
  std::size_t chars = 0, bytes = 0;
  std::size_t pos = 0;
  while (pos < tok.size()) {
    const std::size_t before = pos;
    const char32_t cp = unicode::decode_next(tok, pos);
    ++chars;
    bytes += cp == kSpaceMarker ? 1 : pos - before;
  }
  char_len_.push_back(chars);
  byte_len_.push_back(bytes);
}

void SubwordVocab::add_base_token(char32_t cp) {
  std::string tok;
  unicode::encode_append(cp, tok);
  alphabet_[cp] = static_cast<std::uint32_t>(tokens_.size());
  tokens_.push_back(std::move(tok));
  ++alphabet_count_;
  index_token(static_cast<std::uint32_t>(tokens_.size() - 1));
}

std::uint32_t SubwordVocab::add_merge(std::uint32_t left,
                                      std::uint32_t right) {
  merges_.emplace_back(left, right);
  tokens_.push_back(tokens_[left] + tokens_[right]);
  const auto id = static_cast<std::uint32_t>(tokens_.size() - 1);
  index_token(id);
  return id;
}

std::vector<std::uint32_t> SubwordVocab::encode(std::string_view text) const {
  const std::vector<char32_t> cps = transform_text(text);
  const std::vector<std::u32string> words = split_words(cps);

  std::vector<std::uint32_t> out;
  out.reserve(cps.size());
  std::unordered_map<std::u32string, std::vector<std::uint32_t>> cache;
  for (const auto& word : words) {
    auto it = cache.find(word);
    if (it == cache.end()) {
      std::vector<std::uint32_t> ids;
      ids.reserve(word.size());
      std::unordered_set<std::uint32_t> present;
      for (char32_t cp : word) {
        const auto a = alphabet_.find(cp);
        const std::uint32_t id = a == alphabet_.end() ? unk_id() : a->second;
        ids.push_back(id);
        present.insert(id);
      }
      // Merges in learned order; a rule can only fire if both sides occur.
      std::uint32_t next_id = 1 + alphabet_count_;
      for (const auto& [l, r] : merges_) {
        const std::uint32_t merged = next_id++;
        if (ids.size() >= 2 && present.contains(l) && present.contains(r)) {
          std::vector<std::uint32_t> rewritten;
          rewritten.reserve(ids.size());
          for (std::size_t i = 0; i < ids.size();) {
            if (i + 1 < ids.size() && ids[i] == l && ids[i + 1] == r) {
              rewritten.push_back(merged);
              i += 2;
            } else {
              rewritten.push_back(ids[i]);
              ++i;
            }
          }
          if (rewritten.size() != ids.size()) {
            ids = std::move(rewritten);
            present.insert(merged);
          }
        }
      }
      it = cache.emplace(word, std::move(ids)).first;
    }
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

std::string SubwordVocab::decode(std::span<const std::uint32_t> ids) const {
  std::string out;
  for (std::uint32_t id : ids) {
    const std::string& tok = token(id);  // range-checks
    std::size_t pos = 0;
    while (pos < tok.size()) {
      const char32_t cp = unicode::decode_next(tok, pos);
      if (cp == kSpaceMarker) {
        out.push_back(' ');
      } else {
        unicode::encode_append(cp, out);
      }
    }
  }
  return out;
}

namespace {

std::string escape_field(std::string_view tok) {
  std::string out;
  out.reserve(tok.size());
  for (char c : tok) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\r': out += "\\r"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view field, std::size_t line_no) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out.push_back(field[i]);
      continue;
    }
    if (++i == field.size()) {
      throw Error("vocab file: dangling escape at line " +
                  std::to_string(line_no));
    }
    switch (field[i]) {
      case '\\': out.push_back('\\'); break;
      case 'r': out.push_back('\r'); break;
      case 'n': out.push_back('\n'); break;
      default:
        throw Error("vocab file: bad escape at line " +
                    std::to_string(line_no));
    }
  }
  return out;
}

}  // namespace

std::string SubwordVocab::serialize() const {
  std::string out = "v=" + std::to_string(size()) +
                    " unk=" + std::to_string(unk_id()) + " algo=" + algo_ +
                    "\n";
  for (std::uint32_t id = 1; id <= alphabet_count_; ++id) {
    out += escape_field(tokens_[id]);
    out += '\n';
  }
  for (const auto& [l, r] : merges_) {
    out += escape_field(tokens_[l]);
    out += ' ';
    out += escape_field(tokens_[r]);
    out += '\n';
  }
  return out;
}

SubwordVocab SubwordVocab::deserialize(std::string_view content) {
  const auto lines = split_lines(content);
  if (lines.empty()) throw Error("vocab file: empty");
  const auto header = split(lines[0], ' ');
  if (header.size() != 3 || !header[0].starts_with("v=") ||
      !header[1].starts_with("unk=") || !header[2].starts_with("algo=")) {
    throw Error("vocab file: bad header '" + std::string(lines[0]) + "'");
  }
  const auto v = static_cast<std::uint32_t>(parse_int(header[0].substr(2), 1));
  const auto unk =
      static_cast<std::uint32_t>(parse_int(header[1].substr(4), 1));
  if (unk != 0) throw Error("vocab file: unk id must be 0");

  SubwordVocab vocab;
  vocab.algo_ = std::string(header[2].substr(5));
  vocab.tokens_.push_back("");  // unk
  vocab.index_token(0);

  std::unordered_map<std::string, std::uint32_t> by_string;
  bool merges_started = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    const auto fields = split(lines[i], ' ');
    if (fields.size() == 1) {
      if (merges_started) {
        throw Error("vocab file: base token after merges at line " +
                    std::to_string(i + 1));
      }
      const std::string tok = unescape_field(fields[0], i + 1);
      const auto cps = unicode::decode(tok);
      if (cps.size() != 1) {
        throw Error("vocab file: base token must be one character at line " +
                    std::to_string(i + 1));
      }
      by_string[tok] = static_cast<std::uint32_t>(vocab.tokens_.size());
      vocab.add_base_token(cps[0]);
    } else if (fields.size() == 2) {
      merges_started = true;
      const std::string left = unescape_field(fields[0], i + 1);
      const std::string right = unescape_field(fields[1], i + 1);
      const auto l = by_string.find(left);
      const auto r = by_string.find(right);
      if (l == by_string.end() || r == by_string.end()) {
        throw Error("vocab file: merge references unknown token at line " +
                    std::to_string(i + 1));
      }
      const std::uint32_t id = vocab.add_merge(l->second, r->second);
      by_string[vocab.tokens_[id]] = id;
    } else {
      throw Error("vocab file: expected 1 or 2 fields at line " +
                  std::to_string(i + 1));
    }
  }
  if (vocab.size() != v) {
    throw Error("vocab file: header v=" + std::to_string(v) + " but " +
                std::to_string(vocab.size()) + " tokens defined");
  }
  return vocab;
}

SubwordVocab train_vocab(std::string_view text, std::uint32_t vocab_size,
                         std::uint64_t training_cap_scaled_bytes,
                         double byte_premium, std::uint64_t seed) {
  // Training sample: head of the shuffled line stream, within the raw cap.
  const auto cap = static_cast<std::uint64_t>(raw_budget(
      static_cast<double>(training_cap_scaled_bytes), byte_premium));
  std::vector<std::string_view> lines = split_lines(text);
  deterministic_shuffle(lines, seed);
  std::vector<std::string_view> sample;
  std::uint64_t taken = 0;
  for (std::string_view line : lines) {
    if (taken + line.size() > cap) break;
    sample.push_back(line);
    taken += line.size();
  }
  if (sample.empty() && !lines.empty()) {
    throw Error("train_vocab: no line fits the training byte cap of " +
                std::to_string(cap));
  }

  // Word frequencies, in first-encounter order for determinism.
  std::vector<std::u32string> word_list;
  std::vector<std::uint64_t> word_freq;
  std::unordered_map<std::u32string, std::uint32_t> word_index;
  std::set<char32_t> alphabet_set;
  for (std::string_view line : sample) {
    std::vector<char32_t> cps = transform_text(std::string_view(line));
    for (char32_t cp : cps) {
      if (cp != kLiteralMarker) alphabet_set.insert(cp);
    }
    for (auto& word : split_words(cps)) {
      const auto it = word_index.find(word);
      if (it == word_index.end()) {
        word_index.emplace(word,
                           static_cast<std::uint32_t>(word_list.size()));
        word_list.push_back(std::move(word));
        word_freq.push_back(1);
      } else {
        ++word_freq[it->second];
      }
    }
  }

  const std::uint32_t min_v =
      static_cast<std::uint32_t>(alphabet_set.size()) + 1;
  if (vocab_size < min_v) {
    throw Error("train_vocab: vocab size " + std::to_string(vocab_size) +
                " cannot cover the base alphabet; minimal feasible size is " +
                std::to_string(min_v));
  }

  SubwordVocab vocab;
  vocab.tokens_.push_back("");  // unk
  vocab.index_token(0);
  for (char32_t cp : alphabet_set) vocab.add_base_token(cp);

  // Words as id sequences.
  std::vector<std::vector<std::uint32_t>> words(word_list.size());
  for (std::size_t w = 0; w < word_list.size(); ++w) {
    words[w].reserve(word_list[w].size());
    for (char32_t cp : word_list[w]) {
      const auto it = vocab.alphabet_.find(cp);
      words[w].push_back(it == vocab.alphabet_.end() ? vocab.unk_id()
                                                     : it->second);
    }
  }

  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> pair_words;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateLess> queue;

  const auto note_pair = [&](std::uint32_t a, std::uint32_t b,
                             std::uint32_t w, std::uint64_t f) {
    const std::uint64_t key = pair_key(a, b);
    pair_counts[key] += f;
    pair_words[key].push_back(w);
  };
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::size_t i = 0; i + 1 < words[w].size(); ++i) {
      note_pair(words[w][i], words[w][i + 1],
                static_cast<std::uint32_t>(w), word_freq[w]);
    }
  }
  for (const auto& [key, count] : pair_counts) {
    const auto a = static_cast<std::uint32_t>(key >> 32);
    const auto b = static_cast<std::uint32_t>(key);
    queue.push({count, vocab.tokens_[a], vocab.tokens_[b], a, b});
  }

  std::unordered_set<std::uint64_t> banned;
  std::unordered_set<std::string> token_strings(vocab.tokens_.begin(),
                                                vocab.tokens_.end());

  while (vocab.size() < vocab_size && !queue.empty()) {
    const Candidate top = queue.top();
    queue.pop();
    const std::uint64_t key = pair_key(top.left, top.right);
    const auto it = pair_counts.find(key);
    if (it == pair_counts.end() || it->second != top.count) continue;  // stale
    if (banned.contains(key)) continue;
    // A merge must mint a fresh token string to keep the table a bijection.
    if (token_strings.contains(top.left_str + top.right_str)) {
      banned.insert(key);
      continue;
    }

    const std::uint32_t merged = vocab.add_merge(top.left, top.right);
    token_strings.insert(vocab.tokens_[merged]);

    auto affected = std::move(pair_words[key]);
    pair_words.erase(key);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()),
                   affected.end());

    std::unordered_set<std::uint64_t> changed;
    for (const std::uint32_t w : affected) {
      auto& word = words[w];
      const std::uint64_t f = word_freq[w];
      bool contains = false;
      for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        if (word[i] == top.left && word[i + 1] == top.right) {
          contains = true;
          break;
        }
      }
      if (!contains) continue;

      for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        const std::uint64_t k = pair_key(word[i], word[i + 1]);
        auto pc = pair_counts.find(k);
        if (pc == pair_counts.end()) {
          throw Error("bpe trainer: pair count bookkeeping out of sync");
        }
        pc->second -= f;
        changed.insert(k);
        if (pc->second == 0) pair_counts.erase(pc);
      }
      std::vector<std::uint32_t> rewritten;
      rewritten.reserve(word.size());
      for (std::size_t i = 0; i < word.size();) {
        if (i + 1 < word.size() && word[i] == top.left &&
            word[i + 1] == top.right) {
          rewritten.push_back(merged);
          i += 2;
        } else {
          rewritten.push_back(word[i]);
          ++i;
        }
      }
      word = std::move(rewritten);
      for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        note_pair(word[i], word[i + 1], w, f);
        changed.insert(pair_key(word[i], word[i + 1]));
      }
    }
    for (const std::uint64_t k : changed) {
      const auto pc = pair_counts.find(k);
      if (pc == pair_counts.end()) continue;
      const auto a = static_cast<std::uint32_t>(k >> 32);
      const auto b = static_cast<std::uint32_t>(k);
      queue.push({pc->second, vocab.tokens_[a], vocab.tokens_[b], a, b});
    }
  }
  return vocab;
}

}  // namespace corpuslm
