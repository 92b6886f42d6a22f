#include "corpuslm/lang.hpp"

#include <cctype>

#include "corpuslm/common.hpp"

namespace corpuslm {

namespace {

bool all_alpha_lower(std::string_view s) {
  for (char c : s) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

LanguageId id(std::string_view lang, std::string_view script) {
  return LanguageId{std::string(lang), std::string(script)};
}

}  // namespace

LanguageId LanguageId::parse(std::string_view raw) {
  const std::string lowered = lower(raw);
  const auto sep = lowered.find('_');
  if (sep == std::string::npos) {
    throw Error("malformed language code '" + std::string(raw) +
                "': expected lang_script");
  }
  const std::string lang = lowered.substr(0, sep);
  const std::string script = lowered.substr(sep + 1);
  if (lang.size() != 3 || !all_alpha_lower(lang)) {
    throw Error("malformed language code '" + std::string(raw) +
                "': bad language token '" + lang + "'");
  }
  if (script.size() != 4 || !all_alpha_lower(script)) {
    throw Error("malformed language code '" + std::string(raw) +
                "': bad script token '" + script + "'");
  }
  return LanguageId{lang, script};
}

void CodePolicy::drop(LanguageId dropped, std::optional<LanguageId> repl) {
  if (macro_members_.contains(dropped)) {
    throw Error("policy conflict: " + dropped.str() +
                " is both dropped and a macrolanguage member");
  }
  if (repl && dropped_.contains(*repl)) {
    throw Error("policy conflict: replacement " + repl->str() +
                " is itself dropped");
  }
  dropped_[std::move(dropped)] = std::move(repl);
}

void CodePolicy::add_macro_member(LanguageId individual, LanguageId macro) {
  if (dropped_.contains(individual)) {
    throw Error("policy conflict: " + individual.str() +
                " is both dropped and a macrolanguage member");
  }
  macro_members_[std::move(individual)] = std::move(macro);
}

bool CodePolicy::is_dropped(const LanguageId& lid) const {
  return dropped_.contains(lid);
}

std::optional<LanguageId> CodePolicy::replacement_for(
    const LanguageId& lid) const {
  const auto it = dropped_.find(lid);
  return it == dropped_.end() ? std::nullopt : it->second;
}

std::optional<LanguageId> CodePolicy::macro_of(const LanguageId& lid) const {
  const auto it = macro_members_.find(lid);
  return it == macro_members_.end() ? std::nullopt
                                    : std::optional<LanguageId>(it->second);
}

CodePolicy CodePolicy::builtin() {
  CodePolicy p;
  // Individual codes retired in favor of their macrolanguage.
  p.drop(id("ory", "orya"), id("ori", "orya"));
  p.drop(id("npi", "deva"), id("nep", "deva"));
  p.drop(id("swh", "latn"), id("swa", "latn"));
  p.drop(id("cmn", "hans"), id("zho", "hans"));
  // Deprecated code.
  p.drop(id("ajp", "arab"), id("apc", "arab"));
  // Covered by their constituent individual languages.
  p.drop(id("hbs", "cyrl"), std::nullopt);
  p.drop(id("hbs", "latn"), std::nullopt);
  // Collective codes for distinct languages.
  p.drop(id("ber", "latn"), std::nullopt);
  p.drop(id("nah", "latn"), std::nullopt);

  p.add_macro_member(id("quy", "latn"), id("que", "latn"));
  p.add_macro_member(id("quz", "latn"), id("que", "latn"));
  return p;
}

NormalizedCode normalize_code(std::string_view raw_code,
                              const CodePolicy& policy) {
  const LanguageId lid = LanguageId::parse(raw_code);
  if (policy.is_dropped(lid)) {
    return Dropped{policy.replacement_for(lid)};
  }
  return lid;
}

}  // namespace corpuslm
