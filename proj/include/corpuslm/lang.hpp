#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace corpuslm {

// ISO 639-3 language code plus ISO 15924 script code, serialized lowercase
// as "lang_script" (e.g. "khm_khmr").
struct LanguageId {
  std::string lang;    // [a-z]{3}
  std::string script;  // [a-z]{4}

  std::string str() const { return lang + "_" + script; }
  auto operator<=>(const LanguageId&) const = default;

  // Throws Error on malformed input, naming the offending token.
  static LanguageId parse(std::string_view raw);
};

// Outcome of normalizing a code that the policy retires.
struct Dropped {
  std::optional<LanguageId> replacement;
};

using NormalizedCode = std::variant<LanguageId, Dropped>;

// Which codes are dropped (optionally in favor of another code) and which
// individual languages feed a macrolanguage dataset.
class CodePolicy {
 public:
  CodePolicy() = default;

  void drop(LanguageId id, std::optional<LanguageId> replacement);
  void add_macro_member(LanguageId individual, LanguageId macro);

  bool is_dropped(const LanguageId& id) const;
  std::optional<LanguageId> replacement_for(const LanguageId& id) const;
  std::optional<LanguageId> macro_of(const LanguageId& id) const;

  // The documented retirements and macrolanguage relations this toolkit
  // ships with.
  static CodePolicy builtin();

 private:
  std::map<LanguageId, std::optional<LanguageId>> dropped_;
  std::map<LanguageId, LanguageId> macro_members_;
};

NormalizedCode normalize_code(std::string_view raw_code,
                              const CodePolicy& policy);

// A file labeled with an individual code lands in both its own language's
// list and the macrolanguage's; macro-labeled files land only in the macro's.
template <typename File>
std::map<LanguageId, std::vector<File>> assign_macro_datasets(
    const std::vector<std::pair<LanguageId, File>>& labeled,
    const CodePolicy& policy) {
  std::map<LanguageId, std::vector<File>> out;
  for (const auto& [id, file] : labeled) {
    out[id].push_back(file);
    if (auto macro = policy.macro_of(id)) {
      out[*macro].push_back(file);
    }
  }
  return out;
}

}  // namespace corpuslm
