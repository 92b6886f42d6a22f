// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Criterion 8 is SKIPPED (not failed) when the external released
// per-language fixture is absent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "corpuslm/bigram.hpp"
#include "corpuslm/bpe.hpp"
#include "corpuslm/byte_premium.hpp"
#include "corpuslm/common.hpp"
#include "corpuslm/dedup.hpp"
#include "corpuslm/eval.hpp"
#include "corpuslm/kernels.hpp"
#include "corpuslm/packed.hpp"
#include <nlohmann/json.hpp>

#include "corpuslm/report.hpp"
#include "corpuslm/unicode.hpp"

using namespace corpuslm;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok,
            const std::string& detail = "") {
  std::cout << "criterion " << criterion << " "
            << (ok ? "PASS" : "FAIL") << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++g_failures;
}

void report_skip(int criterion, const char* name, const std::string& why) {
  std::cout << "criterion " << criterion << " SKIPPED: " << name << " ("
            << why << ")\n";
}

// ---------------------------------------------------------------- fixtures

std::string random_multiscript(std::mt19937_64& rng, std::size_t approx) {
  std::string out;
  while (out.size() < approx) {
    const int script = static_cast<int>(rng() % 5);
    const int run = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < run; ++i) {
      switch (script) {
        case 0:
        case 1: out.push_back(static_cast<char>('a' + rng() % 26)); break;
        case 2: {
          const char32_t cp = 0x430 + rng() % 32;  // Cyrillic
          unicode::encode_append(cp, out);
          break;
        }
        case 3: {
          const char32_t cp = 0x4E00 + rng() % 0x200;  // CJK
          unicode::encode_append(cp, out);
          break;
        }
        default: {
          const char32_t cp = 0x1780 + rng() % 0x30;  // Khmer
          unicode::encode_append(cp, out);
          break;
        }
      }
    }
    if (rng() % 3 == 0) out.push_back('\n');
  }
  return out;
}

std::string dedup_fixture(std::mt19937_64& rng) {
  const std::size_t size = 1000 + rng() % 64'000;
  std::string base = random_multiscript(rng, size);
  if (base.size() > 65'536) base.resize(65'536);
  while (!base.empty() &&
         (static_cast<unsigned char>(base.back()) & 0xC0) == 0x80) {
    base.pop_back();
  }
  if (!base.empty() && static_cast<unsigned char>(base.back()) >= 0xC0) {
    base.pop_back();
  }
  // Plant duplicated blocks at codepoint boundaries.
  const int plants = static_cast<int>(rng() % 6);
  for (int p = 0; p < plants && base.size() > 600; ++p) {
    const std::size_t len = 110 + rng() % 500;
    std::size_t from = rng() % (base.size() - std::min(len, base.size() - 1));
    while (from < base.size() &&
           (static_cast<unsigned char>(base[from]) & 0xC0) == 0x80) {
      ++from;
    }
    std::size_t end = std::min(from + len, base.size());
    while (end < base.size() &&
           (static_cast<unsigned char>(base[end]) & 0xC0) == 0x80) {
      ++end;
    }
    std::size_t to = rng() % base.size();
    while (to < base.size() &&
           (static_cast<unsigned char>(base[to]) & 0xC0) == 0x80) {
      ++to;
    }
    base.insert(to, base.substr(from, end - from));
  }
  return base;
}

bool valid_utf8(std::string_view s) {
  return kernels::utf8_validate({reinterpret_cast<const std::uint8_t*>(
                                     s.data()),
                                 s.size()}) == kernels::npos;
}

// Sorted-window duplicate detector, independent of the rolling-hash path.
bool oracle_has_duplicate(std::string_view s, std::size_t w) {
  if (s.size() < w + 1) return false;
  const std::size_t m = s.size() - w + 1;
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::memcmp(s.data() + a, s.data() + b, w) < 0;
  });
  for (std::size_t k = 1; k < m; ++k) {
    if (std::memcmp(s.data() + idx[k - 1], s.data() + idx[k], w) == 0) {
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------- criteria

void criterion_1_dedup() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240801);
  bool ok = true;
  std::string detail;
  for (int iter = 0; iter < 200 && ok; ++iter) {
    const std::string input = dedup_fixture(rng);
    if (!valid_utf8(input)) {
      ok = false;
      detail = "fixture generator produced invalid UTF-8";
      break;
    }
    std::string out;
    try {
      out = dedup_bytes(input);
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
      break;
    }
    if (!valid_utf8(out)) {
      ok = false;
      detail = "output not valid UTF-8 at fixture " + std::to_string(iter);
    } else if (oracle_has_duplicate(out, kDedupWindow)) {
      ok = false;
      detail = "duplicate window survived at fixture " + std::to_string(iter);
    } else if (dedup_bytes(out) != out) {
      ok = false;
      detail = "not idempotent at fixture " + std::to_string(iter);
    }
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  if (ok && elapsed >= 30'000) {
    ok = false;
    detail = "exceeded 30s budget";
  }
  report(1, "dedup oracle equivalence, validity, idempotence (200 fixtures)",
         ok, detail.empty() ? std::to_string(elapsed) + " ms" : detail);
}

void criterion_2_bigram() {
  std::mt19937_64 rng(20240802);
  bool ok = true;
  std::string detail;
  for (int iter = 0; iter < 100 && ok; ++iter) {
    const std::uint32_t v = 2 + static_cast<std::uint32_t>(rng() % 49);
    const std::uint16_t seq_len = 2 + static_cast<std::uint16_t>(rng() % 16);
    const int records =
        1 + static_cast<int>(rng() % (1000 / seq_len));
    PackedDataset ds;
    ds.seq_len = seq_len;
    std::map<std::uint32_t, std::uint64_t> uni;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> bi;
    for (int r = 0; r < records; ++r) {
      std::uint32_t prev = 0;
      for (int i = 0; i < seq_len; ++i) {
        const auto t = static_cast<std::uint32_t>(rng() % v);
        ds.ids.push_back(t);
        ++uni[t];
        if (i > 0) ++bi[{prev, t}];
        prev = t;
      }
    }
    const std::uint64_t total = ds.ids.size();
    const BigramModel model = train_bigram(ds, v);
    for (std::uint32_t p = 0; p < v && ok; ++p) {
      if (!uni.count(p)) continue;
      for (std::uint32_t n = 0; n < v && ok; ++n) {
        const double got = model.score_next(p, n);
        const auto it = bi.find({p, n});
        double expect;
        if (it != bi.end()) {
          expect = static_cast<double>(it->second) /
                   static_cast<double>(uni[p]);
        } else {
          const double up =
              uni.count(n) ? static_cast<double>(uni[n]) /
                                 static_cast<double>(total)
                           : 1.0 / static_cast<double>(v);
          expect = 0.40 * up;  // exact lambda from the protocol
        }
        if (got != expect && std::abs(got - expect) > 1e-15 * expect) {
          ok = false;
          detail = "score mismatch";
        }
      }
    }
    // Fully observed contexts (never record-final) sum to 1 within 1e-12.
    for (std::uint32_t p = 0; p < v && ok; ++p) {
      if (!uni.count(p)) continue;
      bool full = true;
      std::uint64_t follower_mass = 0;
      for (std::uint32_t n = 0; n < v; ++n) {
        const auto it = bi.find({p, n});
        if (it == bi.end()) {
          full = false;
          break;
        }
        follower_mass += it->second;
      }
      if (!full || follower_mass != uni[p]) continue;
      double sum = 0.0;
      for (std::uint32_t n = 0; n < v; ++n) sum += model.score_next(p, n);
      if (std::abs(sum - 1.0) > 1e-12) {
        ok = false;
        detail = "fully observed context sums to " + format_double(sum);
      }
    }
  }
  report(2, "bigram scores match hand counts; lambda = 0.40 exact; "
            "observed contexts sum to 1",
         ok, detail);
}

void criterion_3_protocol() {
  bool ok = true;
  std::string detail;
  try {
    // Three-sequence end-to-end hand oracle (see tests/test_eval.cpp for
    // the derivation of every constant).
    const SubwordVocab vocab = train_vocab("ab ab", 5, 1'000'000'000, 1.0, 0);
    const auto ds = pack_sequences(
        {std::string_view("ab ab"), std::string_view("ab")}, vocab, 2);
    const BigramModel model = train_bigram(ds, vocab.size());
    const std::vector<EvalSequence> corpus{{0, "ab ab"}, {1, "b"}, {2, "qq"}};
    const auto result =
        eval_bigram(model, vocab, corpus, "bigram", "xxx_latn");
    const double lp0 = std::log(1.0 / 3.0) + std::log(0.40 * 0.75);
    const double lp2 = std::log(1.0 / 5.0);
    const double expect = (-lp0 - lp2) / 2.0;
    if (std::abs(result.record.log_ppl - expect) > 1e-12 ||
        result.record.n_sequences != 2 || result.record.n_skipped != 1) {
      ok = false;
      detail = "hand oracle mismatch: got " +
               format_double(result.record.log_ppl) + ", want " +
               format_double(expect);
    }
    // {-2, -4} aggregates to exactly 3.0.
    const auto record = log_perplexity(
        {{"m", "l_latn", 0, -2.0}, {"m", "l_latn", 1, -4.0}});
    if (record.log_ppl != 3.0) {
      ok = false;
      detail = "{-2,-4} gave " + format_double(record.log_ppl);
    }
    // UNK tokens score ln(1/v) exactly.
    const auto adjusted =
        unk_adjust({{0, -99.0, true}, {1, -0.5, false}}, 50'000);
    if (adjusted[0].logprob != std::log(1.0 / 50'000.0) ||
        adjusted[1].logprob != -0.5) {
      ok = false;
      detail = "unk adjustment wrong";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(3, "half-split protocol: hand oracle, exact mean, exact UNK", ok,
         detail);
}

void criterion_4_premium() {
  bool ok = true;
  std::string detail;
  try {
    // Direct ratio is exact on constructed parallel fixtures.
    std::string target, english;
    for (int i = 0; i < 1000; ++i) {
      unicode::encode_append(0x430 + (i % 30), target);  // 2 bytes each
      english.push_back(static_cast<char>('a' + i % 26));
    }
    if (direct_byte_premium(target, english).b != 2.0) {
      ok = false;
      detail = "direct ratio not exact";
    }
    if (direct_byte_premium(std::string(391, 'x'), std::string(100, 'y')).b !=
        3.91) {
      ok = false;
      detail = "391/100 ratio not exact";
    }
    // Clip bounds.
    BytePremiumEstimate low, high;
    low.b = 0.05;
    high.b = 123.0;
    if (clip_premium(low).b != 0.70 || clip_premium(high).b != 5.00 ||
        !clip_premium(low).clipped) {
      ok = false;
      detail = "clip bounds broken";
    }
    // Planted affine recovery within 1e-9 and the normal-equations oracle
    // on noisy data (oracle inline, mirroring tests/test_premium.cpp).
    std::mt19937_64 rng(20240804);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::uniform_real_distribution<double> ent(2.0, 9.0);
    const auto planted = [](double e, ScriptType s) {
      double v = 0.8 + 0.35 * e;
      if (s == ScriptType::abjad) v += -0.1;
      if (s == ScriptType::abugida) v += 0.9;
      if (s == ScriptType::logography) v += -0.4;
      return v;
    };
    std::vector<RegressionSample> exact, noisy;
    for (int i = 0; i < 60; ++i) {
      RegressionSample s;
      s.entropy = ent(rng);
      s.script = static_cast<ScriptType>(rng() % 4);
      s.byte_premium = planted(s.entropy, s.script);
      exact.push_back(s);
      s.byte_premium += noise(rng);
      noisy.push_back(s);
    }
    const RegressionModel m = fit_regression(exact);
    if (std::abs(m.intercept - 0.8) > 1e-9 ||
        std::abs(m.entropy_weight - 0.35) > 1e-9 ||
        std::abs(m.script_weights[0] + 0.1) > 1e-9 ||
        std::abs(m.script_weights[1] - 0.9) > 1e-9 ||
        std::abs(m.script_weights[2] + 0.4) > 1e-9) {
      ok = false;
      detail = "planted coefficients not recovered";
    }
    // Normal equations via Cholesky-free Gauss-Jordan.
    const RegressionModel mn = fit_regression(noisy);
    constexpr int p = 5;
    double xtx[p][p] = {}, xty[p] = {}, inv[p][p] = {};
    for (const auto& s : noisy) {
      double r[p] = {1.0, s.entropy, 0, 0, 0};
      if (s.script == ScriptType::abjad) r[2] = 1;
      if (s.script == ScriptType::abugida) r[3] = 1;
      if (s.script == ScriptType::logography) r[4] = 1;
      for (int i = 0; i < p; ++i) {
        xty[i] += r[i] * s.byte_premium;
        for (int j = 0; j < p; ++j) xtx[i][j] += r[i] * r[j];
      }
    }
    for (int i = 0; i < p; ++i) inv[i][i] = 1.0;
    for (int col = 0; col < p; ++col) {
      int piv = col;
      for (int r = col + 1; r < p; ++r) {
        if (std::abs(xtx[r][col]) > std::abs(xtx[piv][col])) piv = r;
      }
      for (int j = 0; j < p; ++j) {
        std::swap(xtx[col][j], xtx[piv][j]);
        std::swap(inv[col][j], inv[piv][j]);
      }
      const double d = xtx[col][col];
      for (int j = 0; j < p; ++j) {
        xtx[col][j] /= d;
        inv[col][j] /= d;
      }
      for (int r = 0; r < p; ++r) {
        if (r == col) continue;
        const double f = xtx[r][col];
        for (int j = 0; j < p; ++j) {
          xtx[r][j] -= f * xtx[col][j];
          inv[r][j] -= f * inv[col][j];
        }
      }
    }
    double beta[p] = {};
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) beta[i] += inv[i][j] * xty[j];
    }
    const double got[p] = {mn.intercept, mn.entropy_weight,
                           mn.script_weights[0], mn.script_weights[1],
                           mn.script_weights[2]};
    for (int i = 0; i < p; ++i) {
      if (std::abs(got[i] - beta[i]) > 1e-9) {
        ok = false;
        detail = "normal-equations oracle disagrees";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(4, "byte premium: exact direct ratio, clip bounds, regression "
            "oracle agreement",
         ok, detail);
}

void criterion_5_table4() {
  bool ok = true;
  std::string detail;
  try {
    const std::string fixture_text = read_file(
        std::string(CORPUSLM_FIXTURES_DIR) + "/training_configs.json");
    const auto fixture = nlohmann::json::parse(fixture_text);
    const std::vector<std::pair<std::string, TrainingConfig>> emitted = {
        {"5MB", make_training_config(Tier::t5mb, {})},
        {"10MB", make_training_config(Tier::t10mb, {})},
        {"100MB", make_training_config(Tier::t100mb, {})},
        {"1GB", make_training_config(Tier::t1gb, {})},
        {"full@50MB", make_training_config(Tier::full, 50'000'000)},
    };
    for (const auto& [key, config] : emitted) {
      const std::string got = training_config_json(config);
      const std::string want = fixture.at(key).dump(2) + "\n";
      if (got != want) {
        ok = false;
        detail = "tier " + key + " differs from the transcription";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(5, "training hyperparameters byte-for-byte vs transcription, "
            "incl. full-tier round-down",
         ok, detail);
}

void criterion_6_tiers() {
  bool ok = true;
  std::string detail;
  try {
    const SubwordVocab vocab =
        train_vocab("ab cd ef gh ij kl mn op", 64, 1'000'000'000, 1.0, 0);
    std::mt19937_64 rng(20240806);
    std::vector<std::string> lines;
    const char alpha[] = "abcdefghijklmnop";
    for (int i = 0; i < 400; ++i) {
      std::string line;
      for (int j = 0; j < 40 + static_cast<int>(rng() % 40); ++j) {
        line += alpha[rng() % 16];
        if (rng() % 4 == 0) line += ' ';
      }
      lines.push_back(line);
    }
    std::vector<std::string_view> views(lines.begin(), lines.end());
    const auto ds = pack_sequences(views, vocab, 16);
    std::uint64_t max_record = 0;
    for (std::size_t r = 0; r < ds.record_count(); ++r) {
      std::uint64_t b = 0;
      for (auto id : ds.record(r)) b += vocab.token_byte_length(id);
      max_record = std::max(max_record, b);
    }
    for (std::uint64_t seed = 0; seed < 20 && ok; ++seed) {
      // A ladder of four budgets standing in for 5MB..1GB, scaled to the
      // fixture. The nesting property is budget-monotone by construction.
      const std::uint64_t ladder[4] = {
          ds.detok_bytes / 16, ds.detok_bytes / 8, ds.detok_bytes / 3,
          (ds.detok_bytes * 3) / 4};
      std::vector<std::set<std::vector<std::uint32_t>>> selections;
      for (const std::uint64_t budget : ladder) {
        const auto sample = sample_tier(ds, budget, 1.0, seed, vocab);
        if (!sample.available) {
          ok = false;
          detail = "tier unexpectedly unavailable";
          break;
        }
        if (sample.data.detok_bytes > budget) {
          ok = false;
          detail = "selection exceeds budget";
          break;
        }
        if (budget - sample.data.detok_bytes >= max_record) {
          ok = false;
          detail = "selection falls short by a full record";
          break;
        }
        std::set<std::vector<std::uint32_t>> records;
        for (std::size_t r = 0; r < sample.data.record_count(); ++r) {
          const auto rec = sample.data.record(r);
          records.emplace(rec.begin(), rec.end());
        }
        selections.push_back(std::move(records));
      }
      for (std::size_t t = 1; t < selections.size() && ok; ++t) {
        if (!std::includes(selections[t].begin(), selections[t].end(),
                           selections[t - 1].begin(),
                           selections[t - 1].end())) {
          ok = false;
          detail = "nesting violated at seed " + std::to_string(seed);
        }
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(6, "tier sampling: nesting over 20 seeds, budget never exceeded, "
            "shortfall under one record",
         ok, detail);
}

void criterion_7_aggregation() {
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(20240807);
  // Win-rate algebra over 1000 random tables.
  for (int iter = 0; iter < 1000 && ok; ++iter) {
    std::map<std::string, double> a, b;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      const std::string language = "l" + std::to_string(rng() % 60);
      if (rng() % 4) a[language] = static_cast<double>(rng() % 20);
      if (rng() % 4) b[language] = static_cast<double>(rng() % 20);
    }
    bool any = false;
    for (const auto& [k, v] : a) any |= b.contains(k);
    if (!any) continue;
    const WinRate ab = win_rates(a, b);
    const WinRate ba = win_rates(b, a);
    if (ab.wins + ba.wins + ab.ties != ab.shared) {
      ok = false;
      detail = "win-rate algebra violated";
    }
  }
  // tier_group_means against a naive recomputation.
  if (ok) {
    std::map<std::string, TierMeta> tiers;
    std::map<std::string, std::map<std::string, double>> records;
    const Tier tier_pool[4] = {Tier::t5mb, Tier::t10mb, Tier::t100mb,
                               Tier::t1gb};
    for (int i = 0; i < 60; ++i) {
      const std::string language = "lg" + std::to_string(i) + "_latn";
      TierMeta meta;
      meta.max_tier = tier_pool[rng() % 4];
      meta.scaled_bytes = tier_scaled_bytes(meta.max_tier);
      tiers[language] = meta;
      records["m1"][language] = static_cast<double>(rng() % 1000) / 7.0;
      records["m2"][language] = static_cast<double>(rng() % 1000) / 7.0;
    }
    const auto rows = tier_group_means(records, tiers);
    for (const auto& row : rows) {
      for (const auto& [model, mean] : row.mean_by_model) {
        double sum = 0.0;
        int count = 0;
        for (const auto& [language, value] : records[model]) {
          const auto& meta = tiers[language];
          std::string group;
          if (meta.max_tier == Tier::t1gb) group = "1000MB";
          else if (meta.max_tier == Tier::t100mb) group = "100MB";
          else group = "10MB, 5MB";
          if (group == row.group) {
            sum += value;
            ++count;
          }
        }
        if (std::abs(mean - sum / count) > 1e-12) {
          ok = false;
          detail = "group mean differs from naive recomputation";
        }
      }
    }
  }
  // Chance-level multiple choice.
  if (ok) {
    std::uniform_real_distribution<double> dist(-30.0, 0.0);
    std::vector<std::size_t> chosen, gold;
    for (int q = 0; q < 10'000; ++q) {
      std::vector<double> options(4);
      for (auto& o : options) o = dist(rng);
      chosen.push_back(multiple_choice(options));
      gold.push_back(rng() % 4);
    }
    const double acc = mc_accuracy(chosen, gold);
    if (std::abs(acc - 0.25) > 0.02) {
      ok = false;
      detail = "chance accuracy " + format_double(acc);
    }
  }
  report(7, "win-rate algebra (1000 tables), group means vs naive recompute, "
            "4-option chance at 0.25 +- 0.02",
         ok, detail);
}

void criterion_8_released() {
  const std::string base =
      std::string(CORPUSLM_FIXTURES_DIR) + "/external";
  const std::string records_path = base + "/flores_logppl.csv";
  const std::string tiers_path = base + "/tiers.csv";
  if (!std::filesystem::exists(records_path) ||
      !std::filesystem::exists(tiers_path)) {
    report_skip(8, "released per-language reproduction (202/202, 73/22/5)",
                "external fixture not present under tests/fixtures/external");
    return;
  }
  bool ok = true;
  std::string detail;
  try {
    std::map<std::string, std::map<std::string, double>> by_model;
    const std::string content = read_file(records_path);
    const auto lines = split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      if (i == 0 && lines[i].starts_with("language,")) continue;
      const auto fields = split(lines[i], ',');
      by_model[std::string(fields[1])][std::string(fields[0])] =
          parse_double(fields[2], i + 1);
    }
    const WinRate wr =
        win_rates(by_model.at("goldfish"), by_model.at("bigram"));
    if (wr.wins != 202 || wr.shared != 202) {
      ok = false;
      detail = "win rate " + std::to_string(wr.wins) + "/" +
               std::to_string(wr.shared);
    }
    // Group sizes over the languages shared by all models in the file.
    std::map<std::string, std::map<std::string, double>> shared = by_model;
    std::set<std::string> join;
    for (const auto& [language, v] : by_model.begin()->second) {
      bool everywhere = true;
      for (const auto& [model, values] : by_model) {
        everywhere &= values.contains(language);
      }
      if (everywhere) join.insert(language);
    }
    for (auto& [model, values] : shared) {
      std::erase_if(values, [&](const auto& kv) {
        return !join.contains(kv.first);
      });
    }
    const auto tiers = parse_tier_csv(read_file(tiers_path));
    const auto rows = tier_group_means(shared, tiers);
    std::map<std::string, std::uint64_t> sizes;
    for (const auto& row : rows) sizes[row.group] = row.n_languages;
    if (sizes["1000MB"] != 73 || sizes["100MB"] != 22 ||
        sizes["10MB, 5MB"] != 5) {
      ok = false;
      detail = "group sizes " + std::to_string(sizes["1000MB"]) + "/" +
               std::to_string(sizes["100MB"]) + "/" +
               std::to_string(sizes["10MB, 5MB"]);
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(8, "released per-language reproduction (202/202, 73/22/5)", ok,
         detail);
}

void criterion_9_tokenizer() {
  bool ok = true;
  std::string detail;
  try {
    std::mt19937_64 rng(20240809);
    // 100 round-trip fixtures over full-alphabet vocabularies.
    for (int iter = 0; iter < 100 && ok; ++iter) {
      const char* alphabets[] = {"abcdefg", "nopqrstu", "xyz"};
      const std::string alpha = alphabets[iter % 3];
      std::string corpus;
      for (int i = 0; i < 200; ++i) {
        corpus += alpha[rng() % alpha.size()];
        if (rng() % 4 == 0) corpus += ' ';
        if (rng() % 25 == 0) corpus += '\n';
      }
      const SubwordVocab vocab =
          train_vocab(corpus, 64, 1'000'000'000, 1.0, iter);
      std::string probe;
      for (int i = 0; i < 50; ++i) {
        probe += alpha[rng() % alpha.size()];
        if (rng() % 5 == 0) probe += ' ';
      }
      if (vocab.decode(vocab.encode(probe)) != probe) {
        ok = false;
        detail = "round-trip failed at fixture " + std::to_string(iter);
      }
    }
    // First merge on "abab abab" is (a, b).
    if (ok) {
      const SubwordVocab vocab =
          train_vocab("abab abab", 6, 1'000'000'000, 1.0, 0);
      if (vocab.merges().empty() ||
          vocab.token(vocab.merges()[0].first) != "a" ||
          vocab.token(vocab.merges()[0].second) != "b") {
        ok = false;
        detail = "first merge is not (a, b)";
      }
    }
    // Bit-determinism across two runs.
    if (ok) {
      std::string corpus;
      for (int i = 0; i < 3000; ++i) {
        corpus += static_cast<char>('a' + rng() % 10);
        if (rng() % 4 == 0) corpus += ' ';
        if (rng() % 40 == 0) corpus += '\n';
      }
      const auto a = train_vocab(corpus, 150, 1'000'000'000, 1.0, 9);
      const auto b = train_vocab(corpus, 150, 1'000'000'000, 1.0, 9);
      if (a.serialize() != b.serialize()) {
        ok = false;
        detail = "training not bit-deterministic";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  report(9, "tokenizer round-trips, pair-count first merge, bit-determinism",
         ok, detail);
}

}  // namespace

int main() {
  std::cout << "kernel backend: " << kernels::backend_name(kernels::active())
            << "\n";
  criterion_1_dedup();
  criterion_2_bigram();
  criterion_3_protocol();
  criterion_4_premium();
  criterion_5_table4();
  criterion_6_tiers();
  criterion_7_aggregation();
  criterion_8_released();
  criterion_9_tokenizer();
  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed (skips noted above)\n";
  return 0;
}
