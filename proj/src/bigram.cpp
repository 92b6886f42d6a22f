#include "corpuslm/bigram.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "corpuslm/common.hpp"

namespace corpuslm {

namespace {

constexpr std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void put_u16(std::string& out, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

std::uint64_t get_uint(std::string_view data, std::size_t& pos, int n,
                       const char* what) {
  if (data.size() - pos < static_cast<std::size_t>(n)) {
    throw Error(std::string("bigram model: truncated reading ") + what);
  }
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos + i]))
         << (8 * i);
  }
  pos += static_cast<std::size_t>(n);
  return v;
}

}  // namespace

std::uint64_t BigramModel::unigram_count(std::uint32_t id) const {
  if (id >= vocab_size_) {
    throw Error("bigram model: token id " + std::to_string(id) +
                " out of range (v=" + std::to_string(vocab_size_) + ")");
  }
  return unigram_[id];
}

std::uint64_t BigramModel::bigram_count(std::uint32_t prev,
                                        std::uint32_t next) const {
  const auto it = bigram_.find(pair_key(prev, next));
  return it == bigram_.end() ? 0 : it->second;
}

double BigramModel::score_next(std::uint32_t prev, std::uint32_t next) const {
  const std::uint64_t uni_prev = unigram_count(prev);
  const std::uint64_t uni_next = unigram_count(next);
  const std::uint64_t both = bigram_count(prev, next);
  if (both > 0) {
    return static_cast<double>(both) / static_cast<double>(uni_prev);
  }
  const double uni =
      uni_next > 0
          ? static_cast<double>(uni_next) / static_cast<double>(total_tokens_)
          : 1.0 / static_cast<double>(vocab_size_);
  return lambda_ * uni;
}

double BigramModel::sequence_logprob(
    std::uint32_t context_last,
    std::span<const std::uint32_t> continuation) const {
  if (continuation.empty()) {
    throw Error("sequence_logprob: empty continuation");
  }
  double sum = 0.0;
  std::uint32_t prev = context_last;
  for (std::uint32_t tok : continuation) {
    sum += std::log(score_next(prev, tok));
    prev = tok;
  }
  return sum;
}

BigramModel train_bigram(const PackedDataset& packed, std::uint32_t vocab_size,
                         double lambda) {
  if (packed.record_count() == 0) {
    throw Error("train_bigram: empty dataset");
  }
  if (lambda <= 0.0 || lambda > 1.0) {
    throw Error("train_bigram: lambda must be in (0, 1]");
  }
  BigramModel model;
  model.vocab_size_ = vocab_size;
  model.lambda_ = lambda;
  model.unigram_.assign(vocab_size, 0);
  for (std::size_t r = 0; r < packed.record_count(); ++r) {
    const auto rec = packed.record(r);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      if (rec[i] >= vocab_size) {
        throw Error("train_bigram: token id " + std::to_string(rec[i]) +
                    " out of range (v=" + std::to_string(vocab_size) + ")");
      }
      ++model.unigram_[rec[i]];
      if (i + 1 < rec.size()) {
        ++model.bigram_[pair_key(rec[i], rec[i + 1])];
      }
    }
  }
  model.total_tokens_ = packed.ids.size();
  return model;
}

std::string BigramModel::serialize() const {
  std::string out = "GFBG";
  put_u16(out, 1);  // version
  put_u32(out, vocab_size_);
  put_u64(out, total_tokens_);
  put_f64(out, lambda_);
  for (std::uint64_t c : unigram_) put_u64(out, c);

  std::vector<std::uint64_t> keys;
  keys.reserve(bigram_.size());
  for (const auto& [key, count] : bigram_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (std::uint64_t key : keys) {
    put_u32(out, static_cast<std::uint32_t>(key >> 32));
    put_u32(out, static_cast<std::uint32_t>(key));
    put_u64(out, bigram_.at(key));
  }
  return out;
}

BigramModel BigramModel::deserialize(std::string_view content) {
  std::size_t pos = 0;
  if (content.size() < 4 || content.substr(0, 4) != "GFBG") {
    throw Error("bigram model: bad magic");
  }
  pos = 4;
  const auto version = get_uint(content, pos, 2, "version");
  if (version != 1) {
    throw Error("bigram model: unsupported version " +
                std::to_string(version));
  }
  BigramModel model;
  model.vocab_size_ =
      static_cast<std::uint32_t>(get_uint(content, pos, 4, "vocab size"));
  model.total_tokens_ = get_uint(content, pos, 8, "token total");
  const std::uint64_t lambda_bits = get_uint(content, pos, 8, "lambda");
  std::memcpy(&model.lambda_, &lambda_bits, sizeof(double));
  model.unigram_.resize(model.vocab_size_);
  for (auto& c : model.unigram_) c = get_uint(content, pos, 8, "unigram");
  const std::size_t rest = content.size() - pos;
  if (rest % 16 != 0) {
    throw Error("bigram model: malformed bigram triple section");
  }
  const std::size_t triples = rest / 16;
  model.bigram_.reserve(triples);
  std::uint64_t last_key = 0;
  for (std::size_t i = 0; i < triples; ++i) {
    const auto prev =
        static_cast<std::uint32_t>(get_uint(content, pos, 4, "prev"));
    const auto next =
        static_cast<std::uint32_t>(get_uint(content, pos, 4, "next"));
    const std::uint64_t count = get_uint(content, pos, 8, "count");
    const std::uint64_t key = pair_key(prev, next);
    if (i > 0 && key <= last_key) {
      throw Error("bigram model: triples not sorted by (prev, next)");
    }
    last_key = key;
    model.bigram_[key] = count;
  }
  return model;
}

}  // namespace corpuslm
