#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "corpuslm/lang.hpp"

namespace corpuslm {

enum class Tier { t5mb, t10mb, t100mb, t1gb, full };

Tier parse_tier(std::string_view name);
std::string_view tier_name(Tier t);
// Budget in byte-premium-scaled bytes; `full` has no fixed budget.
std::uint64_t tier_scaled_bytes(Tier t);
inline constexpr std::uint64_t kMinScaledBytes = 5'000'000;

// Benchmark-language remapping. None means the language is excluded from
// comparisons; unmapped ids pass through. Targets are never keys, so
// substitution is idempotent.
class SubstitutionMap {
 public:
  void add(LanguageId external, std::optional<LanguageId> internal);
  // entry: external id or id mapped to nothing (excluded)
  std::optional<LanguageId> substitute(const LanguageId& id) const;

  // TSV rows "external_id<TAB>internal_id_or_NONE".
  static SubstitutionMap parse_tsv(std::string_view tsv);
  std::string serialize_tsv() const;

 private:
  std::map<LanguageId, std::optional<LanguageId>> entries_;
};

struct WinRate {
  std::uint64_t wins = 0;    // strictly lower log-perplexity for A
  std::uint64_t shared = 0;  // languages present for both models
  std::uint64_t ties = 0;
};

// Joined on the shared language set; throws when the join is empty.
WinRate win_rates(const std::map<std::string, double>& log_ppl_a,
                  const std::map<std::string, double>& log_ppl_b);

struct TierMeta {
  Tier max_tier = Tier::t5mb;
  std::uint64_t scaled_bytes = 0;
};

// CSV rows "language,max_tier,scaled_bytes" (header optional).
std::map<std::string, TierMeta> parse_tier_csv(std::string_view csv);

struct TierGroupRow {
  std::string group;  // "1000MB", "100MB", "10MB, 5MB"
  std::uint64_t n_languages = 0;
  std::map<std::string, double> mean_by_model;
};

// Arithmetic mean per (tier group, model). The 10MB and 5MB tiers share one
// group; `full` joins the group of its size rounded down. Throws when a
// language in the records lacks tier metadata.
std::vector<TierGroupRow> tier_group_means(
    const std::map<std::string, std::map<std::string, double>>&
        log_ppl_by_model,
    const std::map<std::string, TierMeta>& tiers);

struct TrainingConfig {
  std::string tier;
  std::uint64_t total_parameters = 0;
  std::uint32_t layers = 0;
  std::uint32_t embedding_size = 0;
  std::uint32_t hidden_size = 0;
  std::uint32_t intermediate_size = 0;
  std::uint32_t attention_heads = 0;
  std::uint32_t attention_head_size = 64;
  double learning_rate = 1e-4;
  std::uint32_t batch_size = 0;
  std::uint32_t epochs = 10;
  std::string activation = "gelu";
  std::uint32_t max_sequence_length = 512;
  std::string position_embedding = "absolute";
  std::string lr_decay = "linear";
  double warmup_fraction = 0.1;
  double adam_epsilon = 1e-6;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double dropout = 0.1;
  double attention_dropout = 0.1;
};

// Hyperparameters per tier: the 39M family for 5MB/10MB, the 125M family
// otherwise; batch size 4/8/32/64 up the tier ladder, with `full` taking the
// batch of its scaled size rounded down (which must be at least 5MB).
TrainingConfig make_training_config(
    Tier tier, std::optional<std::uint64_t> full_dataset_scaled_bytes = {});

std::string training_config_json(const TrainingConfig& config);

// Architecture-derived parameter estimate for sanity checks (embeddings
// plus per-layer attention/FFN weights, 50K vocabulary).
std::uint64_t estimate_parameters(const TrainingConfig& config);

// Report emission. Doubles print with one decimal in Markdown and full
// round-trip precision in CSV.
using Cell = std::variant<std::string, double, std::int64_t>;

struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class ReportFormat { csv, markdown };
ReportFormat parse_report_format(std::string_view name);

std::string emit_report(const ReportTable& table, ReportFormat format);
ReportTable parse_report_csv(std::string_view csv);

ReportTable tier_means_table(const std::vector<TierGroupRow>& rows,
                             const std::vector<std::string>& model_order);
ReportTable win_rate_table(
    const std::vector<std::tuple<std::string, std::string, WinRate>>& rates);

}  // namespace corpuslm
