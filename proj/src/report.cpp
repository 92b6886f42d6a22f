#include "corpuslm/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "corpuslm/common.hpp"
#include "corpuslm/kernels.hpp"

namespace corpuslm {

using nlohmann::json;

Tier parse_tier(std::string_view name) {
  if (name == "5MB") return Tier::t5mb;
  if (name == "10MB") return Tier::t10mb;
  if (name == "100MB") return Tier::t100mb;
  if (name == "1GB") return Tier::t1gb;
  if (name == "full") return Tier::full;
  throw Error("unknown tier '" + std::string(name) + "'");
}

std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::t5mb: return "5MB";
    case Tier::t10mb: return "10MB";
    case Tier::t100mb: return "100MB";
    case Tier::t1gb: return "1GB";
    case Tier::full: return "full";
  }
  return "?";
}

std::uint64_t tier_scaled_bytes(Tier t) {
  switch (t) {
    case Tier::t5mb: return 5'000'000;
    case Tier::t10mb: return 10'000'000;
    case Tier::t100mb: return 100'000'000;
    case Tier::t1gb: return 1'000'000'000;
    case Tier::full: break;
  }
  throw Error("tier 'full' has no fixed byte budget");
}

void SubstitutionMap::add(LanguageId external,
                          std::optional<LanguageId> internal) {
  if (internal && entries_.contains(*internal)) {
    throw Error("substitution map: target " + internal->str() +
                " is itself a key (chain)");
  }
  for (const auto& [key, value] : entries_) {
    if (value && *value == external) {
      throw Error("substitution map: key " + external.str() +
                  " is already a target (chain)");
    }
  }
  entries_[std::move(external)] = std::move(internal);
}

std::optional<LanguageId> SubstitutionMap::substitute(
    const LanguageId& id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) return id;
  return it->second;  // nullopt means excluded
}

SubstitutionMap SubstitutionMap::parse_tsv(std::string_view tsv) {
  SubstitutionMap map;
  const auto lines = split_lines(tsv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty() || line.starts_with('#')) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw Error("substitution map: expected 2 fields at line " +
                  std::to_string(i + 1));
    }
    const LanguageId external = LanguageId::parse(fields[0]);
    if (fields[1] == "NONE") {
      map.add(external, std::nullopt);
    } else {
      map.add(external, LanguageId::parse(fields[1]));
    }
  }
  return map;
}

std::string SubstitutionMap::serialize_tsv() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key.str();
    out += '\t';
    out += value ? value->str() : "NONE";
    out += '\n';
  }
  return out;
}

WinRate win_rates(const std::map<std::string, double>& log_ppl_a,
                  const std::map<std::string, double>& log_ppl_b) {
  WinRate wr;
  for (const auto& [language, a] : log_ppl_a) {
    const auto it = log_ppl_b.find(language);
    if (it == log_ppl_b.end()) continue;
    ++wr.shared;
    if (a < it->second) {
      ++wr.wins;
    } else if (a == it->second) {
      ++wr.ties;
    }
  }
  if (wr.shared == 0) throw Error("win_rates: no shared languages");
  return wr;
}

std::map<std::string, TierMeta> parse_tier_csv(std::string_view csv) {
  std::map<std::string, TierMeta> tiers;
  const auto lines = split_lines(csv);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (i == 0 && lines[i].starts_with("language,")) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 3) {
      throw Error("tier CSV: expected 3 fields at line " +
                  std::to_string(i + 1));
    }
    TierMeta meta;
    meta.max_tier = parse_tier(fields[1]);
    meta.scaled_bytes =
        static_cast<std::uint64_t>(parse_int(fields[2], i + 1));
    tiers[std::string(fields[0])] = meta;
  }
  return tiers;
}

namespace {

// Group labels follow the tier ladder; `full` joins the group of its scaled
// size rounded down.
std::string tier_group(const std::string& language, const TierMeta& meta) {
  switch (meta.max_tier) {
    case Tier::t1gb: return "1000MB";
    case Tier::t100mb: return "100MB";
    case Tier::t10mb:
    case Tier::t5mb: return "10MB, 5MB";
    case Tier::full: break;
  }
  if (meta.scaled_bytes >= tier_scaled_bytes(Tier::t100mb)) return "100MB";
  if (meta.scaled_bytes >= kMinScaledBytes) return "10MB, 5MB";
  throw Error("tier metadata for " + language + ": scaled size " +
              std::to_string(meta.scaled_bytes) +
              " is below the 5MB pipeline minimum");
}

}  // namespace

std::vector<TierGroupRow> tier_group_means(
    const std::map<std::string, std::map<std::string, double>>&
        log_ppl_by_model,
    const std::map<std::string, TierMeta>& tiers) {
  // group -> model -> values, grouped per language.
  std::map<std::string, std::map<std::string, std::vector<double>>> grouped;
  std::map<std::string, std::set<std::string>> group_languages;
  for (const auto& [model, by_language] : log_ppl_by_model) {
    for (const auto& [language, value] : by_language) {
      const auto it = tiers.find(language);
      if (it == tiers.end()) {
        throw Error("tier_group_means: no tier for language " + language);
      }
      const std::string group = tier_group(language, it->second);
      grouped[group][model].push_back(value);
      group_languages[group].insert(language);
    }
  }
  static const char* kOrder[] = {"1000MB", "100MB", "10MB, 5MB"};
  std::vector<TierGroupRow> rows;
  for (const char* group : kOrder) {
    const auto it = grouped.find(group);
    if (it == grouped.end()) continue;
    TierGroupRow row;
    row.group = group;
    row.n_languages = group_languages[group].size();
    for (const auto& [model, values] : it->second) {
      row.mean_by_model[model] =
          kernels::sum_f64(values) / static_cast<double>(values.size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TrainingConfig make_training_config(
    Tier tier, std::optional<std::uint64_t> full_dataset_scaled_bytes) {
  Tier batch_tier = tier;
  if (tier == Tier::full) {
    if (!full_dataset_scaled_bytes) {
      throw Error("make_training_config: tier 'full' needs the dataset's "
                  "scaled byte size");
    }
    const std::uint64_t scaled = *full_dataset_scaled_bytes;
    if (scaled < kMinScaledBytes) {
      throw Error("make_training_config: scaled size " +
                  std::to_string(scaled) +
                  " is below the 5MB pipeline minimum");
    }
    // Round the dataset size down to a tier for the batch size. A full model
    // only exists when 1GB is unavailable, so 100MB is the ceiling.
    if (scaled >= tier_scaled_bytes(Tier::t100mb)) {
      batch_tier = Tier::t100mb;
    } else if (scaled >= tier_scaled_bytes(Tier::t10mb)) {
      batch_tier = Tier::t10mb;
    } else {
      batch_tier = Tier::t5mb;
    }
  }

  TrainingConfig config;
  config.tier = std::string(tier_name(tier));
  const bool small = tier == Tier::t5mb || tier == Tier::t10mb;
  if (small) {
    config.total_parameters = 39'000'000;
    config.layers = 4;
    config.embedding_size = 512;
    config.hidden_size = 512;
    config.intermediate_size = 2048;
    config.attention_heads = 8;
  } else {
    config.total_parameters = 125'000'000;
    config.layers = 12;
    config.embedding_size = 768;
    config.hidden_size = 768;
    config.intermediate_size = 3072;
    config.attention_heads = 12;
  }
  switch (batch_tier) {
    case Tier::t5mb: config.batch_size = 4; break;
    case Tier::t10mb: config.batch_size = 8; break;
    case Tier::t100mb: config.batch_size = 32; break;
    case Tier::t1gb: config.batch_size = 64; break;
    case Tier::full: throw Error("unreachable");
  }
  return config;
}

std::string training_config_json(const TrainingConfig& c) {
  json doc;
  doc["tier"] = c.tier;
  doc["total_parameters"] = c.total_parameters;
  doc["layers"] = c.layers;
  doc["embedding_size"] = c.embedding_size;
  doc["hidden_size"] = c.hidden_size;
  doc["intermediate_size"] = c.intermediate_size;
  doc["attention_heads"] = c.attention_heads;
  doc["attention_head_size"] = c.attention_head_size;
  doc["learning_rate"] = c.learning_rate;
  doc["batch_size"] = c.batch_size;
  doc["epochs"] = c.epochs;
  doc["activation"] = c.activation;
  doc["max_sequence_length"] = c.max_sequence_length;
  doc["position_embedding"] = c.position_embedding;
  doc["lr_decay"] = c.lr_decay;
  doc["warmup_fraction"] = c.warmup_fraction;
  doc["adam_epsilon"] = c.adam_epsilon;
  doc["adam_beta1"] = c.adam_beta1;
  doc["adam_beta2"] = c.adam_beta2;
  doc["dropout"] = c.dropout;
  doc["attention_dropout"] = c.attention_dropout;
  return doc.dump(2) + "\n";
}

std::uint64_t estimate_parameters(const TrainingConfig& c) {
  const std::uint64_t vocab = 50'000;
  const std::uint64_t h = c.hidden_size;
  const std::uint64_t embeddings =
      vocab * c.embedding_size + c.max_sequence_length * c.embedding_size;
  const std::uint64_t attention = 4 * h * h;
  const std::uint64_t ffn = 2 * h * c.intermediate_size;
  return embeddings + c.layers * (attention + ffn);
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw Error("unknown report format '" + std::string(name) + "'");
}

namespace {

std::string format_cell(const Cell& cell, ReportFormat format) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  const double v = std::get<double>(cell);
  if (format == ReportFormat::csv) return format_double(v);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string emit_report(const ReportTable& table, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += format_cell(row[c], format);
      }
      out += '\n';
    }
    return out;
  }
  out += '|';
  for (const auto& col : table.columns) {
    out += ' ';
    out += col;
    out += " |";
  }
  out += "\n|";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += " --- |";
  out += '\n';
  for (const auto& row : table.rows) {
    out += '|';
    for (const auto& cell : row) {
      out += ' ';
      out += format_cell(cell, format);
      out += " |";
    }
    out += '\n';
  }
  return out;
}

ReportTable parse_report_csv(std::string_view csv) {
  ReportTable table;
  const auto lines = split_lines(csv);
  if (lines.empty()) throw Error("report CSV: empty");
  for (const auto col : split(lines[0], ',')) {
    table.columns.emplace_back(col);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<Cell> row;
    for (const auto field : split(lines[i], ',')) {
      std::int64_t iv = 0;
      double dv = 0;
      try {
        iv = parse_int(field);
        row.emplace_back(iv);
        continue;
      } catch (const Error&) {
      }
      try {
        dv = parse_double(field);
        row.emplace_back(dv);
        continue;
      } catch (const Error&) {
      }
      row.emplace_back(std::string(field));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ReportTable tier_means_table(const std::vector<TierGroupRow>& rows,
                             const std::vector<std::string>& model_order) {
  ReportTable table;
  table.columns = {"Data size", "# Langs"};
  for (const auto& model : model_order) table.columns.push_back(model);
  for (const auto& row : rows) {
    std::vector<Cell> cells;
    cells.emplace_back(row.group);
    cells.emplace_back(static_cast<std::int64_t>(row.n_languages));
    for (const auto& model : model_order) {
      const auto it = row.mean_by_model.find(model);
      if (it == row.mean_by_model.end()) {
        cells.emplace_back(std::string("-"));
      } else {
        cells.emplace_back(it->second);
      }
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

ReportTable win_rate_table(
    const std::vector<std::tuple<std::string, std::string, WinRate>>& rates) {
  ReportTable table;
  table.columns = {"Model", "Versus", "Wins", "Shared", "Ties"};
  for (const auto& [a, b, wr] : rates) {
    table.rows.push_back({Cell{a}, Cell{b},
                          Cell{static_cast<std::int64_t>(wr.wins)},
                          Cell{static_cast<std::int64_t>(wr.shared)},
                          Cell{static_cast<std::int64_t>(wr.ties)}});
  }
  return table;
}

}  // namespace corpuslm
