#include "corpuslm/pipeline.hpp"

#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "corpuslm/common.hpp"
#include "corpuslm/dedup.hpp"
#include "corpuslm/kernels.hpp"
#include "corpuslm/unicode.hpp"

namespace corpuslm {

using nlohmann::json;

SourceClass parse_source_class(std::string_view name) {
  if (name == "primary_merge") return SourceClass::primary_merge;
  if (name == "glot500") return SourceClass::glot500;
  if (name == "madlad400") return SourceClass::madlad400;
  throw Error("unknown source class '" + std::string(name) + "'");
}

std::string_view source_class_name(SourceClass c) {
  switch (c) {
    case SourceClass::primary_merge: return "primary_merge";
    case SourceClass::glot500: return "glot500";
    case SourceClass::madlad400: return "madlad400";
  }
  return "?";
}

std::vector<ManifestEntry> parse_manifest_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("manifest JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error("manifest JSON: expected a top-level array");
  std::vector<ManifestEntry> entries;
  for (const auto& obj : doc) {
    ManifestEntry entry;
    entry.language = LanguageId::parse(obj.at("language").get<std::string>());
    for (const auto& src : obj.at("sources")) {
      SourceFile file;
      file.path = src.at("path").get<std::string>();
      file.source_class =
          parse_source_class(src.at("source_class").get<std::string>());
      file.source_name = src.at("source_name").get<std::string>();
      entry.sources.push_back(std::move(file));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string write_manifest_json(const std::vector<ManifestEntry>& entries) {
  json doc = json::array();
  for (const auto& entry : entries) {
    json sources = json::array();
    for (const auto& src : entry.sources) {
      sources.push_back({{"path", src.path.string()},
                         {"source_class",
                          std::string(source_class_name(src.source_class))},
                         {"source_name", src.source_name}});
    }
    doc.push_back({{"language", entry.language.str()}, {"sources", sources}});
  }
  return doc.dump(2) + "\n";
}

void HoldoutSet::add_line(std::string_view line) {
  std::string normalized = unicode::normalize_line(line);
  if (!normalized.empty()) lines_.insert(std::move(normalized));
}

void HoldoutSet::add_corpus(std::string_view text) {
  for (std::string_view line : split_lines(text)) add_line(line);
}

bool HoldoutSet::contains(std::string_view raw_line) const {
  return lines_.contains(unicode::normalize_line(raw_line));
}

double count_avg_line_tokens(std::string_view text) {
  std::uint64_t lines_with_tokens = 0;
  std::uint64_t tokens = 0;
  for (std::string_view line : split_lines(text)) {
    std::uint64_t line_tokens = 0;
    bool in_token = false;
    for (char c : line) {
      const bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
      if (!ws && !in_token) ++line_tokens;
      in_token = !ws;
    }
    if (line_tokens > 0) {
      ++lines_with_tokens;
      tokens += line_tokens;
    }
  }
  if (lines_with_tokens == 0) return 0.0;
  return static_cast<double>(tokens) / static_cast<double>(lines_with_tokens);
}

DatasetManifest plan_merge(const LanguageId& language,
                           const std::vector<WeighedSource>& sources,
                           std::uint64_t budget_scaled_bytes,
                           const BytePremiumEstimate& premium,
                           double avg_line_tokens) {
  DatasetManifest manifest;
  manifest.language = language;

  std::uint64_t class_bytes[3] = {0, 0, 0};
  for (const auto& src : sources) {
    class_bytes[static_cast<int>(src.file.source_class)] += src.bytes;
  }
  const double budget = static_cast<double>(budget_scaled_bytes);

  std::uint64_t running = class_bytes[0];
  bool include[3] = {true, false, false};
  include[1] = scaled_size(static_cast<double>(running), premium.b) < budget;
  if (include[1]) running += class_bytes[1];
  include[2] =
      scaled_size(static_cast<double>(running), premium.b) < budget ||
      avg_line_tokens < kShortLineTokenThreshold;
  if (include[2]) running += class_bytes[2];

  for (const auto& src : sources) {
    if (!include[static_cast<int>(src.file.source_class)]) continue;
    manifest.sources.push_back({src.file, src.bytes, 0.0});
    manifest.total_raw_bytes += src.bytes;
  }
  if (manifest.total_raw_bytes > 0) {
    for (auto& inc : manifest.sources) {
      inc.proportion = static_cast<double>(inc.bytes) /
                       static_cast<double>(manifest.total_raw_bytes);
    }
  }
  return manifest;
}

std::vector<std::string_view> exclude_holdout(
    const std::vector<std::string_view>& lines, const HoldoutSet& holdout) {
  std::vector<std::string_view> kept;
  kept.reserve(lines.size());
  for (std::string_view line : lines) {
    if (!holdout.contains(line)) kept.push_back(line);
  }
  return kept;
}

BibleOnlyDecision exclude_bible_only(
    const ManifestEntry& entry, const std::set<std::string>& bible_names) {
  if (entry.sources.empty()) return BibleOnlyDecision::drop_empty;
  for (const auto& src : entry.sources) {
    if (!bible_names.contains(src.source_name)) {
      return BibleOnlyDecision::keep;
    }
  }
  return BibleOnlyDecision::drop_bible_only;
}

namespace {

std::string filtered_source_text(const SourceFile& src,
                                 const HoldoutSet& holdout) {
  const std::string raw = read_file(src.path);
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(raw.data());
  const std::size_t bad = kernels::utf8_validate({bytes, raw.size()});
  if (bad != kernels::npos) throw Utf8Error(bad, src.path.string());

  std::string out;
  out.reserve(raw.size());
  for (std::string_view line : exclude_holdout(split_lines(raw), holdout)) {
    out.append(line);
    out.push_back('\n');
  }
  return out;
}

}  // namespace

MergedLanguage merge_language(const ManifestEntry& entry,
                              const HoldoutSet& holdout,
                              const BytePremiumEstimate& premium,
                              const MergeOptions& options) {
  MergedLanguage result;
  result.decision = exclude_bible_only(entry, options.bible_sources);
  if (result.decision != BibleOnlyDecision::keep) return result;

  // Holdout filtering happens before merging, so plan sizes reflect the
  // text that can actually ship.
  std::vector<std::string> texts;
  std::vector<WeighedSource> weighed;
  texts.reserve(entry.sources.size());
  for (const auto& src : entry.sources) {
    texts.push_back(filtered_source_text(src, holdout));
    weighed.push_back({src, texts.back().size()});
  }

  // The short-line rule looks at the dataset before madlad400 joins:
  // primary text, plus glot500 when the budget admits it.
  std::uint64_t pre_madlad_bytes = 0;
  for (const auto& w : weighed) {
    if (w.file.source_class == SourceClass::primary_merge)
      pre_madlad_bytes += w.bytes;
  }
  const bool glot_included =
      scaled_size(static_cast<double>(pre_madlad_bytes), premium.b) <
      static_cast<double>(options.budget_scaled_bytes);
  std::string pre_madlad_text;
  for (std::size_t i = 0; i < weighed.size(); ++i) {
    const SourceClass c = weighed[i].file.source_class;
    if (c == SourceClass::primary_merge ||
        (c == SourceClass::glot500 && glot_included)) {
      pre_madlad_text += texts[i];
    }
  }
  const double avg_tokens = count_avg_line_tokens(pre_madlad_text);

  result.manifest = plan_merge(entry.language, weighed,
                               options.budget_scaled_bytes, premium,
                               avg_tokens);

  bool class_included[3] = {false, false, false};
  for (const auto& inc : result.manifest.sources) {
    class_included[static_cast<int>(inc.file.source_class)] = true;
  }
  std::string merged;
  for (std::size_t i = 0; i < weighed.size(); ++i) {
    if (class_included[static_cast<int>(weighed[i].file.source_class)]) {
      merged += texts[i];
    }
  }
  result.text = dedup_bytes(merged);
  return result;
}

}  // namespace corpuslm
