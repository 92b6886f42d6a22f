#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "corpuslm/common.hpp"
#include "corpuslm/report.hpp"

using namespace corpuslm;
using nlohmann::json;

namespace {

LanguageId lid(const char* s) { return LanguageId::parse(s); }

}  // namespace

TEST_CASE("substitution map from the shipped table") {
  const SubstitutionMap map = SubstitutionMap::parse_tsv(
      read_file(std::string(CORPUSLM_DATA_DIR) + "/substitutions.tsv"));

  SUBCASE("documented entries") {
    auto quy = map.substitute(lid("quy_latn"));
    REQUIRE(quy.has_value());
    CHECK(quy->str() == "que_latn");
    CHECK_FALSE(map.substitute(lid("taq_tfng")).has_value());
    CHECK_FALSE(map.substitute(lid("tzm_tfng")).has_value());
    auto yue = map.substitute(lid("yue_hant"));
    REQUIRE(yue.has_value());
    CHECK(yue->str() == "zho_hant");
  }
  SUBCASE("unmapped ids pass through") {
    auto eng = map.substitute(lid("eng_latn"));
    REQUIRE(eng.has_value());
    CHECK(eng->str() == "eng_latn");
  }
  SUBCASE("idempotence: targets are never keys") {
    for (const char* probe : {"que_latn", "arb_arab", "hin_deva",
                              "zho_hant", "mlt_latn"}) {
      const auto once = map.substitute(lid(probe));
      REQUIRE(once.has_value());
      const auto twice = map.substitute(*once);
      REQUIRE(twice.has_value());
      CHECK(once->str() == twice->str());
    }
  }
  SUBCASE("chain construction is rejected") {
    SubstitutionMap m;
    m.add(lid("aaa_latn"), lid("bbb_latn"));
    CHECK_THROWS_AS(m.add(lid("bbb_latn"), lid("ccc_latn")), Error);
    CHECK_THROWS_AS(m.add(lid("ddd_latn"), lid("aaa_latn")), Error);
  }
}

TEST_CASE("win_rates") {
  SUBCASE("hand-counted example") {
    const std::map<std::string, double> a{{"x", 1.0}, {"y", 2.0}};
    const std::map<std::string, double> b{{"x", 2.0}, {"y", 1.0}};
    const WinRate wr = win_rates(a, b);
    CHECK(wr.wins == 1);
    CHECK(wr.shared == 2);
    CHECK(wr.ties == 0);
  }
  SUBCASE("identical records tie everywhere") {
    const std::map<std::string, double> a{{"x", 1.0}, {"y", 2.0}, {"z", 3.0}};
    const WinRate wr = win_rates(a, a);
    CHECK(wr.wins == 0);
    CHECK(wr.ties == 3);
    CHECK(wr.shared == 3);
  }
  SUBCASE("empty join errors") {
    CHECK_THROWS_AS(win_rates({{"x", 1.0}}, {{"y", 1.0}}), Error);
  }
  SUBCASE("wins(A,B) + wins(B,A) + ties == shared on random tables") {
    std::mt19937_64 rng(61);
    for (int iter = 0; iter < 1000; ++iter) {
      std::map<std::string, double> a, b;
      const int n = 1 + static_cast<int>(rng() % 30);
      for (int i = 0; i < n; ++i) {
        const std::string language = "l" + std::to_string(rng() % 40);
        const double va = static_cast<double>(rng() % 16);
        const double vb = static_cast<double>(rng() % 16);
        if (rng() % 4) a[language] = va;
        if (rng() % 4) b[language] = vb;
      }
      bool any_shared = false;
      for (const auto& [k, v] : a) any_shared |= b.contains(k);
      if (!any_shared) continue;
      const WinRate ab = win_rates(a, b);
      const WinRate ba = win_rates(b, a);
      CHECK(ab.shared == ba.shared);
      CHECK(ab.ties == ba.ties);
      CHECK(ab.wins + ba.wins + ab.ties == ab.shared);
    }
  }
}

TEST_CASE("tier_group_means") {
  const auto tiers = parse_tier_csv(
      "language,max_tier,scaled_bytes\n"
      "aaa_latn,1GB,1000000000\n"
      "bbb_latn,100MB,100000000\n"
      "ccc_latn,10MB,10000000\n"
      "ddd_latn,5MB,5000000\n"
      "eee_latn,full,50000000\n"
      "fff_latn,full,200000000\n");

  SUBCASE("one language per group returns the value itself") {
    const std::map<std::string, std::map<std::string, double>> records{
        {"m", {{"aaa_latn", 7.5}, {"bbb_latn", 3.25}, {"ccc_latn", 10.0}}}};
    const auto rows = tier_group_means(records, tiers);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].group == "1000MB");
    CHECK(rows[0].mean_by_model.at("m") == 7.5);
    CHECK(rows[1].group == "100MB");
    CHECK(rows[1].mean_by_model.at("m") == 3.25);
    CHECK(rows[2].group == "10MB, 5MB");
    CHECK(rows[2].mean_by_model.at("m") == 10.0);
  }
  SUBCASE("five-language fixture against hand-computed means") {
    const std::map<std::string, std::map<std::string, double>> records{
        {"m1",
         {{"aaa_latn", 4.0},
          {"bbb_latn", 6.0},
          {"ccc_latn", 1.0},
          {"ddd_latn", 3.0},
          {"eee_latn", 5.0}}},
        {"m2", {{"ccc_latn", 2.0}, {"ddd_latn", 4.0}}}};
    const auto rows = tier_group_means(records, tiers);
    REQUIRE(rows.size() == 3);
    // eee (full @ 50MB) rounds down into the 10MB,5MB group.
    CHECK(rows[2].n_languages == 3);
    CHECK(rows[2].mean_by_model.at("m1") ==
          doctest::Approx((1.0 + 3.0 + 5.0) / 3.0).epsilon(1e-12));
    CHECK(rows[2].mean_by_model.at("m2") ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rows[0].n_languages == 1);
    CHECK(rows[1].n_languages == 1);
  }
  SUBCASE("full tier above 100MB scaled joins the 100MB group") {
    const std::map<std::string, std::map<std::string, double>> records{
        {"m", {{"fff_latn", 9.0}, {"bbb_latn", 3.0}}}};
    const auto rows = tier_group_means(records, tiers);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].group == "100MB");
    CHECK(rows[0].n_languages == 2);
    CHECK(rows[0].mean_by_model.at("m") == doctest::Approx(6.0));
  }
  SUBCASE("language without tier metadata errors by name") {
    const std::map<std::string, std::map<std::string, double>> records{
        {"m", {{"zzz_latn", 1.0}}}};
    CHECK_THROWS_WITH_AS(tier_group_means(records, tiers),
                         doctest::Contains("zzz_latn"), Error);
  }
  SUBCASE("invariant under language reordering (map iteration fixed)") {
    std::mt19937_64 rng(71);
    std::map<std::string, std::map<std::string, double>> records;
    const char* languages[] = {"aaa_latn", "bbb_latn", "ccc_latn",
                               "ddd_latn", "eee_latn"};
    std::vector<std::pair<std::string, double>> inserted;
    for (const char* l : languages) {
      inserted.emplace_back(l, static_cast<double>(rng() % 100) / 7.0);
    }
    records["m"] = {inserted.begin(), inserted.end()};
    const auto base = tier_group_means(records, tiers);
    for (int iter = 0; iter < 5; ++iter) {
      std::shuffle(inserted.begin(), inserted.end(), rng);
      std::map<std::string, std::map<std::string, double>> shuffled;
      for (const auto& [l, v] : inserted) shuffled["m"][l] = v;
      const auto rows = tier_group_means(shuffled, tiers);
      REQUIRE(rows.size() == base.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].mean_by_model.at("m") ==
              base[i].mean_by_model.at("m"));
      }
    }
  }
}

TEST_CASE("make_training_config matches the transcribed fixture exactly") {
  const json fixture = json::parse(
      read_file(std::string(CORPUSLM_FIXTURES_DIR) + "/training_configs.json"));

  const auto check_tier = [&](const char* key, Tier tier,
                              std::optional<std::uint64_t> scaled) {
    const TrainingConfig config = make_training_config(tier, scaled);
    const std::string emitted = training_config_json(config);
    const std::string expected = fixture.at(key).dump(2) + "\n";
    CHECK(emitted == expected);
  };
  check_tier("5MB", Tier::t5mb, {});
  check_tier("10MB", Tier::t10mb, {});
  check_tier("100MB", Tier::t100mb, {});
  check_tier("1GB", Tier::t1gb, {});
  check_tier("full@50MB", Tier::full, 50'000'000);

  SUBCASE("spot checks straight from the table") {
    const auto small = make_training_config(Tier::t5mb, {});
    CHECK(small.total_parameters == 39'000'000);
    CHECK(small.layers == 4);
    CHECK(small.batch_size == 4);
    CHECK(small.learning_rate == 1e-4);
    const auto big = make_training_config(Tier::t1gb, {});
    CHECK(big.total_parameters == 125'000'000);
    CHECK(big.layers == 12);
    CHECK(big.batch_size == 64);
  }
  SUBCASE("full-tier round-down boundaries") {
    CHECK(make_training_config(Tier::full, 5'000'000).batch_size == 4);
    CHECK(make_training_config(Tier::full, 9'999'999).batch_size == 4);
    CHECK(make_training_config(Tier::full, 10'000'000).batch_size == 8);
    CHECK(make_training_config(Tier::full, 99'999'999).batch_size == 8);
    CHECK(make_training_config(Tier::full, 100'000'000).batch_size == 32);
    CHECK(make_training_config(Tier::full, 999'999'999).batch_size == 32);
  }
  SUBCASE("full tier below the 5MB minimum errors") {
    CHECK_THROWS_AS(make_training_config(Tier::full, 4'999'999), Error);
    CHECK_THROWS_AS(make_training_config(Tier::full, {}), Error);
  }
  SUBCASE("architecture-derived parameter count within 5% of the label") {
    for (const Tier tier : {Tier::t5mb, Tier::t10mb, Tier::t100mb,
                            Tier::t1gb}) {
      const auto config = make_training_config(tier, {});
      const double estimate =
          static_cast<double>(estimate_parameters(config));
      const double label = static_cast<double>(config.total_parameters);
      CHECK(std::abs(estimate - label) / label < 0.05);
    }
  }
}

TEST_CASE("emit_report") {
  ReportTable table;
  table.columns = {"Data size", "# Langs", "modelA", "modelB"};
  table.rows.push_back({Cell{std::string("1000MB")}, Cell{std::int64_t{73}},
                        Cell{76.94}, Cell{112.31}});
  table.rows.push_back({Cell{std::string("10MB, 5MB")}, Cell{std::int64_t{5}},
                        Cell{130.52}, Cell{148.3}});

  SUBCASE("markdown uses one decimal and the expected header") {
    const std::string md = emit_report(table, ReportFormat::markdown);
    CHECK(md.starts_with("| Data size | # Langs | modelA | modelB |\n"));
    CHECK(md.find("| 1000MB | 73 | 76.9 | 112.3 |") != std::string::npos);
    CHECK(md.find("| 10MB, 5MB | 5 | 130.5 | 148.3 |") != std::string::npos);
  }
  SUBCASE("csv keeps full precision and round-trips byte-identically") {
    const std::string csv = emit_report(table, ReportFormat::csv);
    const ReportTable parsed = parse_report_csv(csv);
    CHECK(emit_report(parsed, ReportFormat::csv) == csv);
    CHECK(csv.find("76.94") != std::string::npos);
  }
  SUBCASE("empty rows give a header-only file") {
    ReportTable empty;
    empty.columns = {"a", "b"};
    CHECK(emit_report(empty, ReportFormat::csv) == "a,b\n");
    CHECK(emit_report(empty, ReportFormat::markdown) ==
          "| a | b |\n| --- | --- |\n");
  }
  SUBCASE("unknown format errors") {
    CHECK_THROWS_AS(parse_report_format("yaml"), Error);
  }
  SUBCASE("win-rate table shape") {
    WinRate wr;
    wr.wins = 202;
    wr.shared = 202;
    wr.ties = 0;
    const auto t = win_rate_table({{"modelA", "bigrams", wr}});
    const std::string md = emit_report(t, ReportFormat::markdown);
    CHECK(md.find("| modelA | bigrams | 202 | 202 | 0 |") !=
          std::string::npos);
  }
}
