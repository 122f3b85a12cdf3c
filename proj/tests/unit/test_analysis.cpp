#include "doctest.h"
#include "laip/analysis.hpp"
#include "laip/error.hpp"
#include "mini.hpp"

#include <algorithm>
#include <random>

using namespace laip;

namespace {

Variant manual(std::string text) { return {std::move(text), Provenance::Manual, std::nullopt, {}}; }

Lexicon one_group(const std::string& canonical, std::vector<std::string> extra) {
  std::vector<Variant> v{manual(canonical)};
  for (auto& e : extra) v.push_back(manual(e));
  return Lexicon({Topic{"T", {KeywordGroup{canonical, std::move(v)}}}});
}

std::uint32_t total(const std::vector<MatchRecord>& recs) {
  std::uint32_t n = 0;
  for (const auto& r : recs) n += r.count;
  return n;
}

CoverageMatrix matrix_with_scores(const std::vector<std::pair<std::string, std::size_t>>& scores, std::size_t cols) {
  std::vector<std::string> rows, columns;
  for (const auto& s : scores) rows.push_back(s.first);
  for (std::size_t c = 0; c < cols; ++c) columns.push_back("c" + std::to_string(c));
  CoverageMatrix m(Granularity::Topic, rows, columns);
  for (std::size_t r = 0; r < scores.size(); ++r)
    for (std::size_t c = 0; c < scores[r].second; ++c) m.at(r, c) = static_cast<std::uint32_t>(c + 1);
  return m;
}

}  // namespace

TEST_CASE("match counts non-overlapping occurrences") {
  const Lexicon lex = one_group("fairness", {"fair", "unfair"});
  CHECK(total(match_keywords(tokenize("fair and unfair treatment"), lex)) == 2);
  CHECK(total(match_keywords(tokenize("fair fair fair"), lex)) == 3);
  CHECK(total(match_keywords(tokenize("unfairness"), lex)) == 0);
  CHECK(match_keywords({}, lex).empty());
}

TEST_CASE("longest variant wins inside one group") {
  const Lexicon lex = one_group("human control", {"control"});
  const auto recs = match_keywords(tokenize("human control matters, control too"), lex);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].variant == "control");
  CHECK(recs[0].count == 1);
  CHECK(recs[1].variant == "human control");
  CHECK(recs[1].count == 1);
}

TEST_CASE("groups match independently") {
  const Lexicon lex({Topic{"Safety", {KeywordGroup{"human control", {manual("human control")}}}},
                     Topic{"Other", {KeywordGroup{"control", {manual("control")}}}}});
  const auto recs = match_keywords(tokenize("human control matters"), lex);
  REQUIRE(recs.size() == 2);
  CHECK(total(recs) == 2);
}

TEST_CASE("hyphenated variants match as n-grams") {
  const Lexicon lex = one_group("well-being", {});
  CHECK(total(match_keywords(tokenize("Well being and well-being, wellbeing"), lex)) == 2);
  const Lexicon agi = one_group("agi", {});
  CHECK(total(match_keywords(tokenize("AGI; magic; agile"), agi)) == 1);
}

TEST_CASE("mini corpus match records") {
  const auto recs = match_corpus(mini::corpus(), mini::base_lexicon());
  struct Row {
    const char* p;
    const char* item;
    const char* topic;
    const char* variant;
  };
  const std::vector<Row> want = {
      {"mini-a", "2", "Humanity", "common good"},  {"mini-a", "1", "Safety", "human control"},
      {"mini-a", "1", "Safety", "safety"},         {"mini-a", "2", "Share", "inequality"},
      {"mini-a", "1", "Transparency", "transparency"},
      {"mini-b", "2", "Accountability", "accountability"},
      {"mini-b", "1", "Privacy", "personal information"}, {"mini-b", "1", "Privacy", "privacy"},
      {"mini-b", "1", "Security", "cyberattack"},  {"mini-b", "1", "Security", "security"},
      {"mini-c", "2", "Collaboration", "collaboration"}, {"mini-c", "2", "Collaboration", "dialogue"},
      {"mini-c", "2", "Collaboration", "partnership"},   {"mini-c", "1", "Fairness", "bias"},
      {"mini-c", "1", "Fairness", "discrimination"},     {"mini-c", "1", "Fairness", "fairness"},
      {"mini-c", "2", "Safety", "test"},
  };
  REQUIRE(recs.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CAPTURE(i);
    CHECK(recs[i].proposal_id == want[i].p);
    CHECK(recs[i].item_id == want[i].item);
    CHECK(recs[i].topic_name == want[i].topic);
    CHECK(recs[i].variant == want[i].variant);
    CHECK(recs[i].canonical == want[i].variant);
    CHECK(recs[i].count == 1);
  }
}

TEST_CASE("mini corpus coverage matrices equal the hand-computed reference") {
  const auto exp = mini::expected();
  const Corpus corpus = mini::corpus();
  const Lexicon lex = mini::base_lexicon();
  const auto topic = compute_coverage(corpus, lex, Granularity::Topic);
  const auto kw = compute_coverage(corpus, lex, Granularity::Keyword);
  CHECK(topic.column_ids() == exp["topic_columns"].get<std::vector<std::string>>());
  CHECK(kw.columns() == lex.canonical_count());
  for (const auto& id : {"mini-a", "mini-b", "mini-c"}) {
    CAPTURE(id);
    const std::size_t r = *topic.row_index(id);
    std::vector<std::uint32_t> row;
    for (std::size_t c = 0; c < topic.columns(); ++c) row.push_back(topic.at(r, c));
    CHECK(row == exp["topic_matrix"][id].get<std::vector<std::uint32_t>>());

    std::map<std::string, std::uint32_t> nz;
    for (std::size_t c = 0; c < kw.columns(); ++c)
      if (kw.at(r, c)) nz[kw.column_ids()[c]] = kw.at(r, c);
    CHECK(nz == exp["keyword_nonzero"][id].get<std::map<std::string, std::uint32_t>>());
    CHECK(topic_coverage_percent(topic, id) == doctest::Approx(exp["coverage_percent"][id].get<double>()));
  }
  CHECK(aggregate_by_topic(kw, lex) == topic);
  CHECK(topic.nonzero_cells() == 10);
  CHECK(kw.nonzero_cells() == 17);
}

TEST_CASE("aggregation identity on bundled data") {
  const Corpus corpus = load_corpus(paths::data("corpus.json"));
  for (const char* file : {"lexicon_base.json", "lexicon_expanded.json"}) {
    const Lexicon lex = load_lexicon(paths::data(file));
    const auto kw = compute_coverage(corpus, lex, Granularity::Keyword);
    const auto topic = compute_coverage(corpus, lex, Granularity::Topic);
    CHECK(aggregate_by_topic(kw, lex) == topic);
    CHECK(topic.columns() == 10);
    for (std::size_t r = 0; r < topic.rows(); ++r) {
      const double pct = topic_coverage_percent(topic, topic.row_ids()[r]);
      CHECK(std::abs(pct * 10 - std::round(pct * 10)) < 1e-12);
    }
  }
}

TEST_CASE("proposal without matches has a zero row") {
  const Corpus c({Proposal{"empty", "T", "P", PublisherType::Industry, 2018, "u", {PrincipleItem{"1", "Nothing here", ""}}}});
  const auto m = compute_coverage(c, mini::base_lexicon(), Granularity::Topic);
  CHECK(m.row_sum(0) == 0);
  CHECK(topic_coverage_percent(m, "empty") == 0.0);
  CHECK_THROWS_AS(topic_coverage_percent(m, "ghost"), NotFoundError);
}

TEST_CASE("eight of ten topics is 0.8") {
  const auto m = matrix_with_scores({{"p", 8}}, 10);
  CHECK(topic_coverage_percent(m, "p") == doctest::Approx(0.8));
}

TEST_CASE("competition ranking") {
  const auto r = rank_proposals(matrix_with_scores({{"c", 3}, {"b", 5}, {"a", 5}}, 10));
  REQUIRE(r.size() == 3);
  CHECK(r[0] == RankingEntry{"a", 5, 1});
  CHECK(r[1] == RankingEntry{"b", 5, 1});
  CHECK(r[2] == RankingEntry{"c", 3, 3});

  const auto flat = rank_proposals(matrix_with_scores({{"x", 2}, {"y", 2}, {"z", 2}}, 4));
  for (const auto& e : flat) CHECK(e.rank == 1);

  const auto exp = mini::expected();
  const auto kw = compute_coverage(mini::corpus(), mini::base_lexicon(), Granularity::Keyword);
  const auto topic = aggregate_by_topic(kw, mini::base_lexicon());
  for (const auto& [name, m] : {std::pair{"topic_ranking", topic}, std::pair{"keyword_ranking", kw}}) {
    const auto got = rank_proposals(m);
    REQUIRE(got.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(got[i].proposal_id == exp[name][i][0].get<std::string>());
      CHECK(got[i].score == exp[name][i][1].get<std::size_t>());
      CHECK(got[i].rank == exp[name][i][2].get<std::size_t>());
    }
  }
}

TEST_CASE("ranking is invariant under row permutation") {
  std::vector<std::pair<std::string, std::size_t>> scores;
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) scores.push_back({"p" + std::to_string(i), rng() % 11});
  const auto ref = rank_proposals(matrix_with_scores(scores, 10));
  for (int k = 0; k < 5; ++k) {
    std::shuffle(scores.begin(), scores.end(), rng);
    CHECK(rank_proposals(matrix_with_scores(scores, 10)) == ref);
  }
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::size_t better = 0;
    for (const auto& e : ref) better += e.score > ref[i].score;
    CHECK(ref[i].rank == better + 1);
  }
}

TEST_CASE("group comparison on the mini corpus") {
  const auto exp = mini::expected();
  const auto topic = compute_coverage(mini::corpus(), mini::base_lexicon(), Granularity::Topic);
  const auto groups = compare_groups(topic, mini::corpus());
  REQUIRE(groups.size() == 10);
  for (const auto& gc : groups) {
    CAPTURE(gc.topic_name);
    const auto means = exp["group_means"][gc.topic_name].get<std::vector<double>>();
    for (std::size_t t = 0; t < 3; ++t) {
      CHECK(gc.groups[t].mean == means[t]);
      CHECK(gc.groups[t].n == 1);
      CHECK_FALSE(gc.groups[t].standard_error.has_value());
    }
    for (const auto& pt : gc.tests) {
      CHECK_FALSE(pt.available);
      CHECK_FALSE(pt.significant);
    }
  }
  const std::string csv = group_tests_to_csv(groups);
  CHECK(csv.find("Humanity,academia_ngo,government,false,n/a,n/a,n/a,n/a\n") != std::string::npos);
  const auto json = nlohmann::json::parse(groups_to_json(groups));
  CHECK(json[0]["tests"][0]["p"].is_null());
  CHECK(json[0]["groups"]["academia_ngo"]["standard_error"].is_null());
  CHECK(json[0]["groups"]["academia_ngo"]["mean"] == 1.0);
}

TEST_CASE("group statistics against a spreadsheet-style recomputation") {
  std::vector<Proposal> ps;
  std::mt19937 rng(27);
  const std::array<PublisherType, 3> types{PublisherType::AcademiaNgo, PublisherType::Government, PublisherType::Industry};
  const std::array<int, 3> sizes{13, 4, 10};
  std::vector<std::string> ids;
  for (int g = 0; g < 3; ++g)
    for (int i = 0; i < sizes[g]; ++i) {
      std::string id = "p" + std::to_string(g) + "-" + std::to_string(i);
      ps.push_back(Proposal{id, "T", "P", types[g], 2018, "u", {PrincipleItem{"1", "word", ""}}});
      ids.push_back(id);
    }
  const Corpus corpus(ps);
  CoverageMatrix m(Granularity::Topic, ids, {"A", "B"});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    m.at(r, 0) = rng() % 12;
    m.at(r, 1) = 2;
  }
  const auto groups = compare_groups(m, corpus);
  // Independent recomputation: plain two-pass formulas per group.
  std::size_t row = 0;
  for (int g = 0; g < 3; ++g) {
    std::vector<double> xs;
    for (int i = 0; i < sizes[g]; ++i) xs.push_back(m.at(row++, 0));
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
    CHECK(groups[0].groups[g].mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(*groups[0].groups[g].standard_error == doctest::Approx(se).epsilon(1e-12));
    CHECK(groups[1].groups[g].mean == 2.0);
    CHECK(*groups[1].groups[g].standard_error == 0.0);
  }
  for (const auto& pt : groups[0].tests) {
    CHECK(pt.available);
    CHECK(pt.result.p >= 0.0);
    CHECK(pt.result.p <= 1.0);
    CHECK(pt.significant == (pt.result.p < 0.05));
  }
  // Constant columns: equal means give the degenerate t = 0, p = 1.
  for (const auto& pt : groups[1].tests) {
    CHECK(pt.result.degenerate);
    CHECK(pt.result.p == 1.0);
    CHECK_FALSE(pt.significant);
  }
}

TEST_CASE("matrix CSV round trip") {
  const auto kw = compute_coverage(mini::corpus(), mini::base_lexicon(), Granularity::Keyword);
  const std::string csv = matrix_to_csv(kw);
  CHECK(csv.rfind("proposal_id,humanity,beneficial,", 0) == 0);
  CHECK(matrix_from_csv(csv, Granularity::Keyword) == kw);
  CHECK_THROWS_AS(matrix_from_csv("id,a\nx,1\n", Granularity::Topic), ParseError);
  CHECK_THROWS_AS(matrix_from_csv("proposal_id,a\nx,-1\n", Granularity::Topic), ParseError);
  CHECK_THROWS_AS(matrix_from_csv("proposal_id,a\nx,1,2\n", Granularity::Topic), ParseError);
  CHECK(ranking_to_csv(rank_proposals(kw)) == "rank,proposal_id,score\n1,mini-c,7\n2,mini-a,5\n2,mini-b,5\n");
}

TEST_CASE("presence is monotone under lexicon growth, counts need not be") {
  // Longest match lets a new variant swallow the start of an older one.
  const Lexicon before = one_group("b c", {"a"});
  const Lexicon after = one_group("b c", {"a", "a b"});
  const auto t = tokenize("a b c");
  CHECK(total(match_keywords(t, before)) == 2);
  CHECK(total(match_keywords(t, after)) == 1);

  std::mt19937 rng(99);
  const std::vector<std::string> alphabet{"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> variants;
    for (int v = 0; v < 4; ++v) {
      std::string s = alphabet[rng() % 4];
      for (unsigned extra = rng() % 3; extra > 0; --extra) s += " " + alphabet[rng() % 4];
      if (std::find(variants.begin(), variants.end(), s) == variants.end()) variants.push_back(s);
    }
    std::string text;
    for (int i = 0; i < 12; ++i) text += alphabet[rng() % 4] + " ";
    const auto toks = tokenize(text);
    for (std::size_t cut = 1; cut < variants.size(); ++cut) {
      const Lexicon small = one_group(variants[0], {variants.begin() + 1, variants.begin() + static_cast<long>(cut)});
      const Lexicon big = one_group(variants[0], {variants.begin() + 1, variants.end()});
      if (total(match_keywords(toks, small)) > 0) CHECK(total(match_keywords(toks, big)) > 0);
    }
  }
}

TEST_CASE("token counts and formatting") {
  const auto counts = proposal_token_counts(mini::corpus());
  REQUIRE(counts.size() == 3);
  CHECK(counts[0] == 14 + 14);
  CHECK(counts[1] == 10 + 1);
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0 / 3) == "0.333333");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(parse_granularity("keyword") == Granularity::Keyword);
  CHECK_FALSE(parse_granularity("word").has_value());
}
