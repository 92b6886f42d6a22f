// corpuslm: corpus curation, bigram baselines, and log-perplexity evaluation
// for multilingual text at configurable scale.

#include <atomic>
#include <future>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corpuslm/bigram.hpp"
#include "corpuslm/bpe.hpp"
#include "corpuslm/byte_premium.hpp"
#include "corpuslm/common.hpp"
#include "corpuslm/dedup.hpp"
#include "corpuslm/eval.hpp"
#include "corpuslm/kernels.hpp"
#include "corpuslm/lang.hpp"
#include "corpuslm/packed.hpp"
#include "corpuslm/pipeline.hpp"
#include "corpuslm/report.hpp"
#include "corpuslm/unicode.hpp"

namespace {

using namespace corpuslm;
using nlohmann::json;

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };
LogLevel g_log_level = LogLevel::info;
std::mutex g_log_mutex;

void log_at(LogLevel level, const std::string& msg) {
  if (level > g_log_level) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  const std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

LogLevel parse_log_level(const std::string& name) {
  if (name == "error") return LogLevel::error;
  if (name == "warn") return LogLevel::warn;
  if (name == "info") return LogLevel::info;
  if (name == "debug") return LogLevel::debug;
  throw Error("unknown log level '" + name + "'");
}

std::map<std::string, double> load_premium_map(const std::string& path) {
  std::map<std::string, double> premiums;
  if (path.empty()) return premiums;
  for (const auto& row : parse_premium_csv(read_file(path))) {
    premiums[row.language] = row.estimate.b;
  }
  return premiums;
}

double premium_for(const std::map<std::string, double>& premiums,
                   const LanguageId& language) {
  const auto it = premiums.find(language.str());
  if (it != premiums.end()) return it->second;
  if (!premiums.empty()) {
    log_at(LogLevel::warn,
           "no byte premium for " + language.str() + ", using 1.0");
  }
  return 1.0;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

// ---------------------------------------------------------------------------
// merge

int run_merge(const std::string& manifest_path, const std::string& out_dir,
              const std::vector<std::string>& holdout_paths,
              const std::string& premiums_path,
              std::uint64_t budget_scaled_bytes,
              const std::vector<std::string>& bible_sources,
              unsigned threads) {
  const auto entries = parse_manifest_json(read_file(manifest_path));
  const auto premiums = load_premium_map(premiums_path);
  const CodePolicy policy = CodePolicy::builtin();

  HoldoutSet holdout;
  for (const auto& path : holdout_paths) {
    holdout.add_corpus(read_file(path));
  }
  log_at(LogLevel::info, "holdout set: " + std::to_string(holdout.size()) +
                             " sentences");

  // Normalize codes, then fan individual-language files into their
  // macrolanguage datasets as well.
  std::vector<std::pair<LanguageId, SourceFile>> labeled;
  for (const auto& entry : entries) {
    const NormalizedCode normalized =
        normalize_code(entry.language.str(), policy);
    if (const auto* dropped = std::get_if<Dropped>(&normalized)) {
      std::string msg = "dropping retired code " + entry.language.str();
      if (dropped->replacement) {
        msg += " (use " + dropped->replacement->str() + ")";
      }
      log_at(LogLevel::warn, msg);
      continue;
    }
    const auto& id = std::get<LanguageId>(normalized);
    for (const auto& src : entry.sources) labeled.emplace_back(id, src);
  }
  const auto by_language = assign_macro_datasets(labeled, policy);

  MergeOptions options;
  options.budget_scaled_bytes = budget_scaled_bytes;
  if (!bible_sources.empty()) {
    options.bible_sources =
        std::set<std::string>(bible_sources.begin(), bible_sources.end());
  }
  std::filesystem::create_directories(out_dir);

  std::vector<std::pair<LanguageId, std::vector<SourceFile>>> work(
      by_language.begin(), by_language.end());
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const auto& [language, sources] = work[i];
      try {
        ManifestEntry entry{language, sources};
        BytePremiumEstimate premium;
        premium.b = premium_for(premiums, language);
        const MergedLanguage merged =
            merge_language(entry, holdout, premium, options);
        if (merged.decision == BibleOnlyDecision::drop_bible_only) {
          log_at(LogLevel::info,
                 language.str() + ": dropped (only Bible data)");
          continue;
        }
        if (merged.decision == BibleOnlyDecision::drop_empty) {
          log_at(LogLevel::info, language.str() + ": dropped (no sources)");
          continue;
        }
        const auto base =
            std::filesystem::path(out_dir) / language.str();
        write_file(base.string() + ".txt", merged.text);
        json doc;
        doc["language"] = language.str();
        doc["total_raw_bytes"] = merged.manifest.total_raw_bytes;
        doc["merged_bytes"] = merged.text.size();
        json srcs = json::array();
        for (const auto& inc : merged.manifest.sources) {
          srcs.push_back(
              {{"path", inc.file.path.string()},
               {"source_class",
                std::string(source_class_name(inc.file.source_class))},
               {"source_name", inc.file.source_name},
               {"bytes", inc.bytes},
               {"proportion", inc.proportion}});
        }
        doc["sources"] = srcs;
        write_file(base.string() + ".manifest.json", doc.dump(2) + "\n");
        log_at(LogLevel::info,
               language.str() + ": merged " +
                   std::to_string(merged.manifest.total_raw_bytes) +
                   " bytes -> " + std::to_string(merged.text.size()) +
                   " after dedup");
      } catch (const std::exception& e) {
        log_at(LogLevel::error, language.str() + ": " + e.what());
        failures.fetch_add(1);
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_threads =
      std::max(1u, std::min<unsigned>(threads, work.size()));
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return failures.load() == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// premium

json model_to_json(const RegressionModel& model) {
  return json{{"intercept", model.intercept},
              {"entropy", model.entropy_weight},
              {"abjad", model.script_weights[0]},
              {"abugida", model.script_weights[1]},
              {"logography", model.script_weights[2]}};
}

RegressionModel model_from_json(const json& doc) {
  RegressionModel model;
  model.intercept = doc.at("intercept").get<double>();
  model.entropy_weight = doc.at("entropy").get<double>();
  model.script_weights = {doc.at("abjad").get<double>(),
                          doc.at("abugida").get<double>(),
                          doc.at("logography").get<double>()};
  return model;
}

// ---------------------------------------------------------------------------
// report record files: CSV "language,model_id,log_ppl"

std::map<std::string, std::map<std::string, double>> load_records_csv(
    const std::string& path, const SubstitutionMap* substitutions) {
  std::map<std::string, std::map<std::string, double>> by_model;
  const std::string content = read_file(path);
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (i == 0 && lines[i].starts_with("language,")) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 3) {
      throw Error("records CSV: expected 3 fields at line " +
                  std::to_string(i + 1));
    }
    std::string language(fields[0]);
    if (substitutions) {
      const auto mapped =
          substitutions->substitute(LanguageId::parse(language));
      if (!mapped) continue;  // excluded from comparison
      language = mapped->str();
    }
    by_model[std::string(fields[1])][language] =
        parse_double(fields[2], i + 1);
  }
  return by_model;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"corpus curation, bigram baselines, and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed = 0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string log_level = "info";
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")
      ->capture_default_str();
  app.add_option("--log-level", log_level, "error|warn|info|debug")
      ->capture_default_str();

  // merge
  auto* merge = app.add_subcommand("merge", "merge per-language sources");
  std::string merge_manifest, merge_out, merge_premiums;
  std::vector<std::string> merge_holdouts, merge_bible;
  std::uint64_t merge_budget = 1'000'000'000;
  merge->add_option("--manifest", merge_manifest)->required();
  merge->add_option("--out", merge_out)->required();
  merge->add_option("--holdout", merge_holdouts, "holdout sentence files");
  merge->add_option("--premiums", merge_premiums, "byte premium CSV");
  merge->add_option("--budget-scaled-bytes", merge_budget)
      ->capture_default_str();
  merge->add_option("--bible-source", merge_bible,
                    "source names counted as Bible-only (default: eBible)");

  // dedup
  auto* dedup = app.add_subcommand("dedup", "remove repeated 100-byte spans");
  std::string dedup_in, dedup_out;
  dedup->add_option("--in", dedup_in)->required();
  dedup->add_option("--out", dedup_out)->required();

  // premium
  auto* premium = app.add_subcommand("premium", "byte premium estimation");
  premium->require_subcommand(1);
  auto* direct = premium->add_subcommand("direct", "ratio on parallel text");
  std::string direct_target, direct_english, direct_language = "und_zzzz",
                             direct_out;
  direct->add_option("--target", direct_target)->required();
  direct->add_option("--english", direct_english)->required();
  direct->add_option("--language", direct_language);
  direct->add_option("--out", direct_out, "premium CSV (default stdout)");
  auto* fit = premium->add_subcommand("fit", "fit the entropy regression");
  std::string fit_seeds, fit_out;
  fit->add_option("--seeds", fit_seeds, "seed CSV")->required();
  fit->add_option("--out", fit_out, "model JSON (default stdout)");
  auto* predict = premium->add_subcommand("predict", "predict from entropy");
  std::string predict_model, predict_in, predict_out;
  predict->add_option("--model", predict_model)->required();
  predict->add_option("--in", predict_in,
                      "CSV language,entropy_bits,script_type")
      ->required();
  predict->add_option("--out", predict_out, "premium CSV (default stdout)");
  auto* entropy_cmd =
      premium->add_subcommand("entropy", "character entropy of a text file");
  std::string entropy_in;
  entropy_cmd->add_option("--in", entropy_in)->required();

  // train-tokenizer
  auto* train_tok = app.add_subcommand("train-tokenizer", "learn a vocab");
  std::string tok_in, tok_out;
  std::uint32_t tok_vocab_size = 50'000;
  std::uint64_t tok_cap = 100'000'000;
  double tok_premium = 1.0;
  train_tok->add_option("--in", tok_in)->required();
  train_tok->add_option("--out", tok_out)->required();
  train_tok->add_option("--vocab-size", tok_vocab_size)
      ->capture_default_str();
  train_tok->add_option("--cap-scaled-bytes", tok_cap)
      ->capture_default_str();
  train_tok->add_option("--premium", tok_premium, "byte premium b")
      ->capture_default_str();

  // tokenize
  auto* tokenize = app.add_subcommand("tokenize", "pack text into records");
  std::string tokenize_in, tokenize_vocab, tokenize_out;
  std::uint16_t tokenize_seq_len = 512;
  tokenize->add_option("--in", tokenize_in)->required();
  tokenize->add_option("--vocab", tokenize_vocab)->required();
  tokenize->add_option("--out", tokenize_out)->required();
  tokenize->add_option("--seq-len", tokenize_seq_len)->capture_default_str();

  // sample
  auto* sample = app.add_subcommand("sample", "sample a tier");
  std::string sample_in, sample_vocab, sample_out, sample_tier_name;
  double sample_premium = 1.0;
  sample->add_option("--in", sample_in)->required();
  sample->add_option("--vocab", sample_vocab)->required();
  sample->add_option("--out", sample_out)->required();
  sample->add_option("--tier", sample_tier_name, "5MB|10MB|100MB|1GB|full")
      ->required();
  sample->add_option("--premium", sample_premium)->capture_default_str();

  // train-bigram
  auto* train_bg = app.add_subcommand("train-bigram", "count a bigram model");
  std::string bg_in, bg_out, bg_vocab;
  std::uint32_t bg_vocab_size = 0;
  double bg_lambda = kDefaultBackoffPenalty;
  train_bg->add_option("--in", bg_in)->required();
  train_bg->add_option("--out", bg_out)->required();
  train_bg->add_option("--vocab", bg_vocab, "vocab file (supplies v)");
  train_bg->add_option("--vocab-size", bg_vocab_size, "explicit v");
  train_bg->add_option("--lambda", bg_lambda)->capture_default_str();

  // eval-ppl
  auto* eval_ppl = app.add_subcommand("eval-ppl", "half-split log-perplexity");
  std::string ep_model, ep_vocab, ep_corpus, ep_emit, ep_model_id = "bigram",
                                             ep_language = "und_zzzz";
  eval_ppl->add_option("--model", ep_model)->required();
  eval_ppl->add_option("--vocab", ep_vocab)->required();
  eval_ppl->add_option("--corpus", ep_corpus)->required();
  eval_ppl->add_option("--emit-scores", ep_emit, "write per-sequence TSV");
  eval_ppl->add_option("--model-id", ep_model_id)->capture_default_str();
  eval_ppl->add_option("--language", ep_language)->capture_default_str();

  // eval-mc
  auto* eval_mc = app.add_subcommand("eval-mc", "multiple-choice accuracy");
  std::string mc_scores, mc_gold;
  eval_mc->add_option("--scores", mc_scores,
                      "TSV model\\tlanguage\\tquestion\\toption\\tlogprob")
      ->required();
  eval_mc->add_option("--gold", mc_gold, "TSV question\\tgold_index")
      ->required();

  // report
  auto* report = app.add_subcommand("report", "aggregate evaluation records");
  report->require_subcommand(1);
  auto* winrates = report->add_subcommand("win-rates", "pairwise wins");
  std::string wr_records, wr_a, wr_b, wr_subs, wr_format = "markdown",
                                               wr_out;
  winrates->add_option("--records", wr_records, "CSV language,model,log_ppl")
      ->required();
  winrates->add_option("--model-a", wr_a)->required();
  winrates->add_option("--model-b", wr_b)->required();
  winrates->add_option("--substitutions", wr_subs, "substitution TSV");
  winrates->add_option("--format", wr_format)->capture_default_str();
  winrates->add_option("--out", wr_out);
  auto* tiermeans = report->add_subcommand("tier-means", "grouped means");
  std::string tm_records, tm_tiers, tm_subs, tm_format = "markdown", tm_out;
  std::vector<std::string> tm_models;
  tiermeans->add_option("--records", tm_records)->required();
  tiermeans->add_option("--tiers", tm_tiers, "CSV language,max_tier,scaled")
      ->required();
  tiermeans->add_option("--models", tm_models, "column order");
  tiermeans->add_option("--substitutions", tm_subs);
  tiermeans->add_option("--format", tm_format)->capture_default_str();
  tiermeans->add_option("--out", tm_out);

  // train-config
  auto* train_config =
      app.add_subcommand("train-config", "per-tier hyperparameters");
  std::string tc_tier, tc_out, tc_tiers_csv, tc_out_dir;
  std::uint64_t tc_scaled = 0;
  train_config->add_option("--tier", tc_tier, "5MB|10MB|100MB|1GB|full");
  train_config->add_option("--scaled-bytes", tc_scaled,
                           "dataset scaled size (full tier)");
  train_config->add_option("--out", tc_out);
  train_config->add_option("--tiers", tc_tiers_csv,
                           "emit one JSON per language from a tier CSV");
  train_config->add_option("--out-dir", tc_out_dir);

  CLI11_PARSE(app, argc, argv);
  g_log_level = parse_log_level(log_level);
  log_at(LogLevel::debug,
         std::string("kernel backend: ") +
             kernels::backend_name(kernels::active()));

  if (*merge) {
    return run_merge(merge_manifest, merge_out, merge_holdouts,
                     merge_premiums, merge_budget, merge_bible, threads);
  }

  if (*dedup) {
    write_file(dedup_out, dedup_bytes(read_file(dedup_in)));
    return 0;
  }

  if (*premium) {
    if (*direct) {
      auto est = clip_premium(direct_byte_premium(read_file(direct_target),
                                                  read_file(direct_english)));
      write_or_print(direct_out,
                     write_premium_csv({{direct_language, est}}));
      return 0;
    }
    if (*fit) {
      std::vector<RegressionSample> samples;
      for (const auto& row : parse_seed_csv(read_file(fit_seeds))) {
        samples.push_back(row.sample);
      }
      const RegressionModel model = fit_regression(samples);
      write_or_print(fit_out, model_to_json(model).dump(2) + "\n");
      return 0;
    }
    if (*predict) {
      const RegressionModel model =
          model_from_json(json::parse(read_file(predict_model)));
      std::vector<PremiumRow> rows;
      const std::string content = read_file(predict_in);
      const auto lines = split_lines(content);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (i == 0 && lines[i].starts_with("language,")) continue;
        const auto fields = split(lines[i], ',');
        if (fields.size() < 3) {
          throw Error("predict input: expected 3 fields at line " +
                      std::to_string(i + 1));
        }
        const double entropy = parse_double(fields[1], i + 1);
        const ScriptType script = parse_script_type(fields[2]);
        rows.push_back({std::string(fields[0]),
                        clip_premium(predict_byte_premium(model, entropy,
                                                          script))});
      }
      write_or_print(predict_out, write_premium_csv(rows));
      return 0;
    }
    if (*entropy_cmd) {
      std::cout << format_double(char_entropy(read_file(entropy_in))) << "\n";
      return 0;
    }
  }

  if (*train_tok) {
    const SubwordVocab vocab = train_vocab(read_file(tok_in), tok_vocab_size,
                                           tok_cap, tok_premium, seed);
    write_file(tok_out, vocab.serialize());
    log_at(LogLevel::info, "vocab: v=" + std::to_string(vocab.size()) + " (" +
                               std::to_string(vocab.merges().size()) +
                               " merges)");
    return 0;
  }

  if (*tokenize) {
    const SubwordVocab vocab =
        SubwordVocab::deserialize(read_file(tokenize_vocab));
    const std::string text = read_file(tokenize_in);
    const PackedDataset ds =
        pack_sequences(split_lines(text), vocab, tokenize_seq_len);
    write_file(tokenize_out, serialize_packed(ds));
    log_at(LogLevel::info,
           "packed " + std::to_string(ds.record_count()) + " records, " +
               std::to_string(ds.truncated_tokens) + " tokens truncated, " +
               std::to_string(ds.detok_bytes) + " de-tokenized bytes");
    return 0;
  }

  if (*sample) {
    const SubwordVocab vocab =
        SubwordVocab::deserialize(read_file(sample_vocab));
    PackedDataset ds = parse_packed(read_file(sample_in));
    recompute_stats(ds, vocab);
    if (sample_tier_name == "full") {
      write_file(sample_out, serialize_packed(ds));
      log_at(LogLevel::info,
             "full tier: " + std::to_string(ds.record_count()) + " records");
      return 0;
    }
    const Tier tier = parse_tier(sample_tier_name);
    const TierSample selected = sample_tier(
        ds, tier_scaled_bytes(tier), sample_premium, seed, vocab);
    if (!selected.available) {
      log_at(LogLevel::error,
             "tier " + sample_tier_name + " unavailable: dataset holds " +
                 std::to_string(ds.detok_bytes) +
                 " de-tokenized bytes; fall back to --tier full");
      return 2;
    }
    write_file(sample_out, serialize_packed(selected.data));
    log_at(LogLevel::info,
           sample_tier_name + ": " +
               std::to_string(selected.data.record_count()) + " of " +
               std::to_string(ds.record_count()) + " records (" +
               std::to_string(selected.data.detok_bytes) + " bytes)");
    return 0;
  }

  if (*train_bg) {
    std::uint32_t v = bg_vocab_size;
    if (!bg_vocab.empty()) {
      v = SubwordVocab::deserialize(read_file(bg_vocab)).size();
    }
    if (v == 0) {
      throw Error("train-bigram: provide --vocab or --vocab-size");
    }
    const PackedDataset ds = parse_packed(read_file(bg_in));
    const BigramModel model = train_bigram(ds, v, bg_lambda);
    write_file(bg_out, model.serialize());
    log_at(LogLevel::info,
           "bigram model: v=" + std::to_string(v) + ", N=" +
               std::to_string(model.total_tokens()));
    return 0;
  }

  if (*eval_ppl) {
    const BigramModel model = BigramModel::deserialize(read_file(ep_model));
    const SubwordVocab vocab = SubwordVocab::deserialize(read_file(ep_vocab));
    const auto corpus = parse_eval_corpus(read_file(ep_corpus));
    const BigramEvalResult result =
        eval_bigram(model, vocab, corpus, ep_model_id, ep_language);
    if (!ep_emit.empty()) {
      write_file(ep_emit, write_scores_tsv(result.scores));
    }
    std::cout << result.record.language << "\t" << result.record.model_id
              << "\tlog_ppl=" << format_double(result.record.log_ppl)
              << "\tn=" << result.record.n_sequences
              << "\tskipped=" << result.record.n_skipped << "\n";
    return 0;
  }

  if (*eval_mc) {
    // Option scores: model \t language \t question \t option \t logprob.
    struct Question {
      std::map<std::uint64_t, double> options;
    };
    std::map<std::pair<std::string, std::string>,
             std::map<std::uint64_t, Question>>
        grouped;
    const std::string content = read_file(mc_scores);
    const auto lines = split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto fields = split(lines[i], '\t');
      if (fields.size() != 5) {
        throw Error("mc scores: expected 5 fields at line " +
                    std::to_string(i + 1));
      }
      const auto question =
          static_cast<std::uint64_t>(parse_int(fields[2], i + 1));
      const auto option =
          static_cast<std::uint64_t>(parse_int(fields[3], i + 1));
      grouped[{std::string(fields[0]), std::string(fields[1])}][question]
          .options[option] = parse_double(fields[4], i + 1);
    }
    std::map<std::uint64_t, std::size_t> gold;
    const std::string gold_content = read_file(mc_gold);
    const auto gold_lines = split_lines(gold_content);
    for (std::size_t i = 0; i < gold_lines.size(); ++i) {
      if (gold_lines[i].empty()) continue;
      const auto fields = split(gold_lines[i], '\t');
      if (fields.size() != 2) {
        throw Error("gold file: expected 2 fields at line " +
                    std::to_string(i + 1));
      }
      gold[static_cast<std::uint64_t>(parse_int(fields[0], i + 1))] =
          static_cast<std::size_t>(parse_int(fields[1], i + 1));
    }
    for (const auto& [key, questions] : grouped) {
      std::vector<std::size_t> chosen, expected;
      for (const auto& [qid, q] : questions) {
        const auto it = gold.find(qid);
        if (it == gold.end()) {
          throw Error("gold file: missing question " + std::to_string(qid));
        }
        std::vector<double> options;
        for (const auto& [oid, lp] : q.options) options.push_back(lp);
        chosen.push_back(multiple_choice(options));
        expected.push_back(it->second);
      }
      std::cout << key.first << "\t" << key.second << "\tn="
                << chosen.size() << "\taccuracy="
                << format_double(mc_accuracy(chosen, expected)) << "\n";
    }
    return 0;
  }

  if (*report) {
    if (*winrates) {
      SubstitutionMap subs;
      if (!wr_subs.empty()) {
        subs = SubstitutionMap::parse_tsv(read_file(wr_subs));
      }
      const auto by_model = load_records_csv(
          wr_records, wr_subs.empty() ? nullptr : &subs);
      const auto a = by_model.find(wr_a);
      const auto b = by_model.find(wr_b);
      if (a == by_model.end() || b == by_model.end()) {
        throw Error("win-rates: records missing model '" +
                    (a == by_model.end() ? wr_a : wr_b) + "'");
      }
      const WinRate wr = win_rates(a->second, b->second);
      const ReportTable table = win_rate_table({{wr_a, wr_b, wr}});
      write_or_print(wr_out,
                     emit_report(table, parse_report_format(wr_format)));
      return 0;
    }
    if (*tiermeans) {
      SubstitutionMap subs;
      if (!tm_subs.empty()) {
        subs = SubstitutionMap::parse_tsv(read_file(tm_subs));
      }
      const auto by_model = load_records_csv(
          tm_records, tm_subs.empty() ? nullptr : &subs);
      const auto tiers = parse_tier_csv(read_file(tm_tiers));
      const auto rows = tier_group_means(by_model, tiers);
      std::vector<std::string> model_order = tm_models;
      if (model_order.empty()) {
        for (const auto& [model, unused] : by_model) {
          model_order.push_back(model);
        }
      }
      const ReportTable table = tier_means_table(rows, model_order);
      write_or_print(tm_out,
                     emit_report(table, parse_report_format(tm_format)));
      return 0;
    }
  }

  if (*train_config) {
    if (!tc_tiers_csv.empty()) {
      if (tc_out_dir.empty()) {
        throw Error("train-config: --tiers needs --out-dir");
      }
      std::filesystem::create_directories(tc_out_dir);
      for (const auto& [language, meta] : parse_tier_csv(
               read_file(tc_tiers_csv))) {
        const TrainingConfig config = make_training_config(
            meta.max_tier, meta.max_tier == Tier::full
                               ? std::optional<std::uint64_t>(meta.scaled_bytes)
                               : std::nullopt);
        write_file(std::filesystem::path(tc_out_dir) / (language + ".json"),
                   training_config_json(config));
      }
      return 0;
    }
    if (tc_tier.empty()) {
      throw Error("train-config: provide --tier or --tiers");
    }
    const Tier tier = parse_tier(tc_tier);
    const TrainingConfig config = make_training_config(
        tier, tier == Tier::full ? std::optional<std::uint64_t>(tc_scaled)
                                 : std::nullopt);
    write_or_print(tc_out, training_config_json(config));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
