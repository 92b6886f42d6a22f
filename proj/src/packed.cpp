#include "corpuslm/packed.hpp"

#include <cstring>
#include <numeric>

#include "corpuslm/byte_premium.hpp"
#include "corpuslm/common.hpp"

namespace corpuslm {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

class Reader {
 public:
  Reader(std::string_view data, std::string_view what)
      : data_(data), what_(what) {}
  std::uint16_t u16() { return static_cast<std::uint16_t>(bytes(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(bytes(4)); }
  std::uint64_t u64() { return bytes(8); }
  void magic(std::string_view expected) {
    if (data_.size() - pos_ < expected.size() ||
        data_.substr(pos_, expected.size()) != expected) {
      throw Error(std::string(what_) + ": bad magic");
    }
    pos_ += expected.size();
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  void done() {
    if (pos_ != data_.size()) {
      throw Error(std::string(what_) + ": trailing bytes");
    }
  }

 private:
  std::uint64_t bytes(int n) {
    if (data_.size() - pos_ < static_cast<std::size_t>(n)) {
      throw Error(std::string(what_) + ": truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<std::uint8_t>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::string_view data_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

}  // namespace

PackedDataset pack_sequences(const std::vector<std::string_view>& lines,
                             const SubwordVocab& vocab,
                             std::uint16_t seq_len) {
  if (seq_len < 2) throw Error("pack_sequences: seq_len must be at least 2");
  PackedDataset ds;
  ds.seq_len = seq_len;
  for (std::string_view line : lines) {
    const std::vector<std::uint32_t> ids = vocab.encode(line);
    ds.ids.insert(ds.ids.end(), ids.begin(), ids.end());
  }
  ds.total_tokens = ds.ids.size();
  ds.truncated_tokens = ds.ids.size() % seq_len;
  ds.ids.resize(ds.ids.size() - ds.truncated_tokens);
  recompute_stats(ds, vocab);
  return ds;
}

void recompute_stats(PackedDataset& ds, const SubwordVocab& vocab) {
  std::uint64_t bytes = 0;
  for (std::uint32_t id : ds.ids) bytes += vocab.token_byte_length(id);
  ds.detok_bytes = bytes;
}

std::string serialize_packed(const PackedDataset& ds) {
  std::string out = "GFTK";
  put_u16(out, 1);  // version
  put_u16(out, ds.seq_len);
  put_u64(out, ds.record_count());
  out.reserve(out.size() + ds.ids.size() * 4);
  for (std::uint32_t id : ds.ids) put_u32(out, id);
  return out;
}

PackedDataset parse_packed(std::string_view content) {
  Reader r(content, "packed dataset");
  r.magic("GFTK");
  const std::uint16_t version = r.u16();
  if (version != 1) {
    throw Error("packed dataset: unsupported version " +
                std::to_string(version));
  }
  PackedDataset ds;
  ds.seq_len = r.u16();
  const std::uint64_t records = r.u64();
  const std::uint64_t count = records * ds.seq_len;
  if (r.remaining() != count * 4) {
    throw Error("packed dataset: size mismatch");
  }
  ds.ids.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) ds.ids.push_back(r.u32());
  ds.total_tokens = ds.ids.size();
  return ds;
}

TierSample sample_tier(const PackedDataset& ds,
                       std::uint64_t tier_scaled_bytes, double b,
                       std::uint64_t seed, const SubwordVocab& vocab) {
  if (tier_scaled_bytes == 0) throw Error("sample_tier: zero tier budget");
  const auto budget = static_cast<std::uint64_t>(
      raw_budget(static_cast<double>(tier_scaled_bytes), b));

  const std::size_t records = ds.record_count();
  std::vector<std::uint64_t> record_bytes(records, 0);
  std::uint64_t total = 0;
  for (std::size_t r = 0; r < records; ++r) {
    for (std::uint32_t id : ds.record(r)) {
      record_bytes[r] += vocab.token_byte_length(id);
    }
    total += record_bytes[r];
  }

  std::vector<std::uint32_t> order(records);
  std::iota(order.begin(), order.end(), 0u);
  deterministic_shuffle(order, seed);

  TierSample result;
  result.available = total >= budget;
  result.data.seq_len = ds.seq_len;
  std::uint64_t taken = 0;
  for (const std::uint32_t r : order) {
    if (taken + record_bytes[r] > budget) break;
    taken += record_bytes[r];
    const auto rec = ds.record(r);
    result.data.ids.insert(result.data.ids.end(), rec.begin(), rec.end());
  }
  result.data.detok_bytes = taken;
  result.data.total_tokens = result.data.ids.size();
  return result;
}

}  // namespace corpuslm
