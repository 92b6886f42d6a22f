#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpuslm/byte_premium.hpp"
#include "corpuslm/lang.hpp"

namespace corpuslm {

// Source priority classes, in merge order.
enum class SourceClass { primary_merge, glot500, madlad400 };

SourceClass parse_source_class(std::string_view name);
std::string_view source_class_name(SourceClass c);

struct SourceFile {
  std::filesystem::path path;
  SourceClass source_class = SourceClass::primary_merge;
  std::string source_name;  // provenance label, e.g. "wikipedia"
};

struct ManifestEntry {
  LanguageId language;
  std::vector<SourceFile> sources;
};

// Loads/saves the manifest interchange format: a JSON array with one object
// per language: {"language": "xxx_yyyy", "sources": [{"path",
// "source_class", "source_name"}]}.
std::vector<ManifestEntry> parse_manifest_json(std::string_view json_text);
std::string write_manifest_json(const std::vector<ManifestEntry>& entries);

// A merge plan: which sources are included and their byte share.
struct DatasetManifest {
  struct Included {
    SourceFile file;
    std::uint64_t bytes = 0;
    double proportion = 0.0;
  };
  LanguageId language;
  std::vector<Included> sources;
  std::uint64_t total_raw_bytes = 0;
};

// Holdout sentences, matched by exact equality after trim + NFC.
class HoldoutSet {
 public:
  void add_line(std::string_view line);
  void add_corpus(std::string_view text);  // newline-delimited sentences
  bool contains(std::string_view raw_line) const;
  std::size_t size() const { return lines_.size(); }

 private:
  std::unordered_set<std::string> lines_;
};

// Mean whitespace-delimited token count over lines containing at least one
// token; 0.0 for input with no such lines.
double count_avg_line_tokens(std::string_view text);

struct WeighedSource {
  SourceFile file;
  std::uint64_t bytes = 0;
};

// Decides which source classes make the final dataset: primary_merge always;
// glot500 while the running byte-premium-scaled size is under budget;
// madlad400 under the same rule or when the dataset's lines average fewer
// than 25.0 tokens. Records per-source proportions over the included bytes.
DatasetManifest plan_merge(const LanguageId& language,
                           const std::vector<WeighedSource>& sources,
                           std::uint64_t budget_scaled_bytes,
                           const BytePremiumEstimate& premium,
                           double avg_line_tokens);

inline constexpr double kShortLineTokenThreshold = 25.0;

// Input lines minus holdout members, order preserved.
std::vector<std::string_view> exclude_holdout(
    const std::vector<std::string_view>& lines, const HoldoutSet& holdout);

enum class BibleOnlyDecision { keep, drop_bible_only, drop_empty };

BibleOnlyDecision exclude_bible_only(const ManifestEntry& entry,
                                     const std::set<std::string>& bible_names);

// End-to-end merge of one language: holdout-filter each source, plan class
// inclusion, concatenate in manifest order, deduplicate.
struct MergeOptions {
  std::uint64_t budget_scaled_bytes = 1'000'000'000;
  std::set<std::string> bible_sources = {"eBible"};
};

struct MergedLanguage {
  BibleOnlyDecision decision = BibleOnlyDecision::keep;
  DatasetManifest manifest;
  std::string text;  // merged + deduplicated, empty unless kept
};

MergedLanguage merge_language(const ManifestEntry& entry,
                              const HoldoutSet& holdout,
                              const BytePremiumEstimate& premium,
                              const MergeOptions& options);

}  // namespace corpuslm
