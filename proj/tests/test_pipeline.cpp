#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "corpuslm/common.hpp"
#include "corpuslm/pipeline.hpp"

using namespace corpuslm;

namespace {

SourceFile src(SourceClass c, const std::string& name) {
  SourceFile f;
  f.path = "/data/" + name;
  f.source_class = c;
  f.source_name = name;
  return f;
}

WeighedSource weighed(SourceClass c, const std::string& name,
                      std::uint64_t bytes) {
  return {src(c, name), bytes};
}

BytePremiumEstimate premium(double b) {
  BytePremiumEstimate est;
  est.b = b;
  return est;
}

const LanguageId kLang = LanguageId::parse("xxx_latn");

}  // namespace

TEST_CASE("count_avg_line_tokens") {
  CHECK(count_avg_line_tokens("a b c\nd e\n") == doctest::Approx(2.5));
  CHECK(count_avg_line_tokens("") == 0.0);
  CHECK(count_avg_line_tokens("   \n\t\n") == 0.0);
  CHECK(count_avg_line_tokens("one\n\ntwo three\n") == doctest::Approx(1.5));

  SUBCASE("1000-line synthetic file matches a per-line recount oracle") {
    std::mt19937_64 rng(11);
    std::string text;
    std::uint64_t oracle_tokens = 0;
    std::uint64_t oracle_lines = 0;
    for (int i = 0; i < 1000; ++i) {
      const int tokens = static_cast<int>(rng() % 12);
      std::string line;
      for (int t = 0; t < tokens; ++t) {
        if (t) line += (rng() % 4 == 0) ? "\t" : " ";
        line += "w" + std::to_string(rng() % 100);
      }
      if (rng() % 10 == 0) line += "   ";  // trailing whitespace
      text += line;
      text += '\n';
      if (tokens > 0) {
        ++oracle_lines;
        oracle_tokens += static_cast<std::uint64_t>(tokens);
      }
    }
    const double expected =
        oracle_lines == 0
            ? 0.0
            : static_cast<double>(oracle_tokens) /
                  static_cast<double>(oracle_lines);
    CHECK(count_avg_line_tokens(text) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("plan_merge class inclusion rules") {
  const std::vector<WeighedSource> sources = {
      weighed(SourceClass::primary_merge, "wikipedia", 600),
      weighed(SourceClass::glot500, "glotA", 300),
      weighed(SourceClass::madlad400, "madlad", 500),
  };

  SUBCASE("already over budget after primary, long lines: only primary") {
    const auto m = plan_merge(kLang, sources, 500, premium(1.0), 40.0);
    REQUIRE(m.sources.size() == 1);
    CHECK(m.sources[0].file.source_name == "wikipedia");
    CHECK(m.total_raw_bytes == 600);
  }
  SUBCASE("over budget but short lines pull in madlad400 anyway") {
    const auto m = plan_merge(kLang, sources, 500, premium(1.0), 10.0);
    REQUIRE(m.sources.size() == 2);
    CHECK(m.sources[0].file.source_name == "wikipedia");
    CHECK(m.sources[1].file.source_name == "madlad");
  }
  SUBCASE("zero running size includes all classes") {
    const auto m = plan_merge(kLang, sources, 10'000, premium(1.0), 40.0);
    CHECK(m.sources.size() == 3);
    CHECK(m.total_raw_bytes == 1400);
  }
  SUBCASE("byte premium scales the budget comparison") {
    // 600 raw at b=2.0 is 300 scaled < 500, so glot500 joins; then 900 raw
    // = 450 scaled < 500, so madlad400 joins too.
    const auto m = plan_merge(kLang, sources, 500, premium(2.0), 40.0);
    CHECK(m.sources.size() == 3);
  }
  SUBCASE("empty source set yields an empty manifest") {
    const auto m = plan_merge(kLang, {}, 500, premium(1.0), 0.0);
    CHECK(m.sources.empty());
    CHECK(m.total_raw_bytes == 0);
  }
  SUBCASE("proportions sum to 1 for non-empty manifests") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
      std::vector<WeighedSource> random_sources;
      const int n = 1 + static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) {
        random_sources.push_back(
            weighed(static_cast<SourceClass>(rng() % 3),
                    "s" + std::to_string(i), 1 + rng() % 10'000));
      }
      const auto m = plan_merge(kLang, random_sources, 1 + rng() % 20'000,
                                premium(0.7 + (rng() % 40) * 0.1),
                                static_cast<double>(rng() % 50));
      if (m.sources.empty()) continue;
      double sum = 0.0;
      for (const auto& inc : m.sources) sum += inc.proportion;
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("exclude_holdout") {
  HoldoutSet holdout;
  holdout.add_line("HELD");

  SUBCASE("removes exact members, keeps the rest") {
    const auto kept = exclude_holdout({"x", "HELD"}, holdout);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == "x");
  }
  SUBCASE("empty holdout is the identity") {
    HoldoutSet empty;
    const auto kept = exclude_holdout({"a", "b", "c"}, empty);
    CHECK(kept == std::vector<std::string_view>{"a", "b", "c"});
  }
  SUBCASE("matching is trim + NFC normalized") {
    CHECK(exclude_holdout({"  HELD \t"}, holdout).empty());
    HoldoutSet accented;
    accented.add_line("café");  // precomposed
    CHECK(exclude_holdout({"café"}, accented).empty());  // decomposed
  }
  SUBCASE("never removes a line absent from the holdout set") {
    std::mt19937_64 rng(17);
    HoldoutSet hs;
    std::vector<std::string> held;
    for (int i = 0; i < 20; ++i) {
      held.push_back("held " + std::to_string(rng() % 1000));
      hs.add_line(held.back());
    }
    std::vector<std::string> lines;
    for (int i = 0; i < 200; ++i) {
      if (rng() % 3 == 0) {
        lines.push_back(held[rng() % held.size()]);
      } else {
        lines.push_back("keep " + std::to_string(rng() % 1000));
      }
    }
    std::vector<std::string_view> views(lines.begin(), lines.end());
    for (const auto kept = exclude_holdout(views, hs);
         std::string_view line : kept) {
      CHECK_FALSE(hs.contains(line));
    }
  }
  SUBCASE("order is preserved") {
    const auto kept = exclude_holdout({"c", "HELD", "a", "b"}, holdout);
    CHECK(kept == std::vector<std::string_view>{"c", "a", "b"});
  }
}

TEST_CASE("exclude_bible_only") {
  const std::set<std::string> bible = {"eBible"};
  ManifestEntry entry;
  entry.language = kLang;

  SUBCASE("only Bible sources: drop") {
    entry.sources = {src(SourceClass::primary_merge, "eBible")};
    CHECK(exclude_bible_only(entry, bible) ==
          BibleOnlyDecision::drop_bible_only);
  }
  SUBCASE("mixed sources: keep") {
    entry.sources = {src(SourceClass::primary_merge, "eBible"),
                     src(SourceClass::primary_merge, "wikipedia")};
    CHECK(exclude_bible_only(entry, bible) == BibleOnlyDecision::keep);
  }
  SUBCASE("no sources: dropped, distinctly") {
    entry.sources = {};
    CHECK(exclude_bible_only(entry, bible) == BibleOnlyDecision::drop_empty);
  }
}

TEST_CASE("manifest JSON round-trips") {
  ManifestEntry entry;
  entry.language = LanguageId::parse("khm_khmr");
  entry.sources = {src(SourceClass::primary_merge, "wikipedia"),
                   src(SourceClass::glot500, "glotA")};
  const std::string text = write_manifest_json({entry});
  const auto parsed = parse_manifest_json(text);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].language.str() == "khm_khmr");
  REQUIRE(parsed[0].sources.size() == 2);
  CHECK(parsed[0].sources[1].source_class == SourceClass::glot500);
  CHECK(parsed[0].sources[1].source_name == "glotA");
  CHECK_THROWS_AS(parse_manifest_json("{not json"), Error);
  CHECK_THROWS_AS(parse_manifest_json("{}"), Error);
}
