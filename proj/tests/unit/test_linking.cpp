#include "doctest.h"
#include "laip/error.hpp"
#include "laip/linking.hpp"
#include "mini.hpp"
#include "nt_checker.hpp"

#include <set>

using namespace laip;
using namespace laip::rdf;

namespace {

struct MiniGraph {
  Corpus corpus = mini::corpus();
  Lexicon lexicon = mini::base_lexicon();
  CoverageMatrix kw = compute_coverage(corpus, lexicon, Granularity::Keyword);
  CoverageMatrix topic = aggregate_by_topic(kw, lexicon);
  LinkGraph graph = build_graph(corpus, lexicon, topic, kw);
};

std::size_t count_predicate(const LinkGraph& g, const char* local) {
  return g.with_predicate(Vocabulary().term(local)).size();
}

}  // namespace

TEST_CASE("IRI validation") {
  CHECK_NOTHROW(Iri("http://example.org/a"));
  CHECK_NOTHROW(Iri("urn:x-y:z"));
  CHECK_THROWS_AS(Iri("relative/path"), ValidationError);
  CHECK_THROWS_AS(Iri("http://example.org/a b"), ValidationError);
  CHECK_THROWS_AS(Iri("http://example.org/<a>"), ValidationError);
  CHECK_THROWS_AS(Iri(":nothing"), ValidationError);
}

TEST_CASE("N-Triples term forms") {
  CHECK(to_ntriples(Literal{"say \"hi\"", ""}) == "\"say \\\"hi\\\"\"");
  CHECK(to_ntriples(Literal{"a\\b\nc\rd\te", "en"}) == "\"a\\\\b\\nc\\rd\\te\"@en");
  CHECK(to_ntriples(Literal{std::string("bell\x07"), ""}) == "\"bell\\u0007\"");
  CHECK(to_ntriples(Literal{"Montréal", ""}) == "\"Montréal\"");
  const Triple t{Iri("http://x/s"), Iri("http://x/p"), Iri("http://x/o")};
  CHECK(to_ntriples(t) == "<http://x/s> <http://x/p> <http://x/o> .\n");
  LinkGraph g;
  CHECK_THROWS_AS(g.add(Iri("http://x/s"), Iri("http://x/p"), Literal{"x", "e n"}), ValidationError);
}

TEST_CASE("graph deduplicates and orders canonically") {
  LinkGraph g;
  CHECK(serialize_ntriples(g).empty());
  g.add(Iri("http://x/b"), Iri("http://x/p"), Literal{"2", ""});
  g.add(Iri("http://x/a"), Iri("http://x/p"), Literal{"1", ""});
  g.add(Iri("http://x/b"), Iri("http://x/p"), Literal{"2", ""});
  g.add(Iri("http://x/a"), Iri("http://x/o"), Iri("http://x/b"));
  CHECK(g.size() == 3);
  CHECK(serialize_ntriples(g) ==
        "<http://x/a> <http://x/o> <http://x/b> .\n"
        "<http://x/a> <http://x/p> \"1\" .\n"
        "<http://x/b> <http://x/p> \"2\" .\n");
}

TEST_CASE("vocabulary minting") {
  const Vocabulary v;
  CHECK(v.proposal("mini-a").str() == "http://linking-ai-principles.example/proposal/mini-a");
  CHECK(v.item("mini-a", "2").str() == "http://linking-ai-principles.example/proposal/mini-a/item/2");
  CHECK(v.topic("AGI/ASI").str() == "http://linking-ai-principles.example/topic/AGI%2FASI");
  CHECK(v.keyword("human control").str() == "http://linking-ai-principles.example/keyword/human%20control");
  CHECK(v.variant("audit", "auditing").str() == "http://linking-ai-principles.example/keyword/audit/variant/auditing");
  CHECK(v.term("coversTopic").str() == "http://linking-ai-principles.example/ontology#coversTopic");
  CHECK(Vocabulary("https://example.org/laip").base() == "https://example.org/laip/");
  CHECK(iri_escape("é") == "%C3%A9");
  CHECK_THROWS_AS(Vocabulary("not a base"), ValidationError);
}

TEST_CASE("mini graph triple counts equal the hand enumeration") {
  const MiniGraph m;
  const auto exp = mini::expected()["triples"];
  CHECK(count_predicate(m.graph, "coversTopic") == exp["coversTopic"].get<std::size_t>());
  CHECK(count_predicate(m.graph, "mentionsKeyword") == exp["mentionsKeyword"].get<std::size_t>());
  CHECK(count_predicate(m.graph, "sharesTopicWith") == exp["sharesTopicWith"].get<std::size_t>());
  CHECK(count_predicate(m.graph, "hasItem") == exp["hasItem"].get<std::size_t>());
  CHECK(m.graph.size() == exp["total"].get<std::size_t>());
  CHECK(count_predicate(m.graph, "coversTopic") == m.topic.nonzero_cells());

  const Vocabulary v;
  CHECK(m.graph.contains({v.proposal("mini-a"), v.term("sharesTopicWith"), v.proposal("mini-c")}));
  CHECK(m.graph.contains({v.proposal("mini-c"), v.term("sharesTopicWith"), v.proposal("mini-a")}));
  CHECK_FALSE(m.graph.contains({v.proposal("mini-a"), v.term("sharesTopicWith"), v.proposal("mini-b")}));
}

TEST_CASE("sharesTopicWith is symmetric and irreflexive on bundled data") {
  const Corpus corpus = load_corpus(paths::data("corpus.json"));
  const Lexicon lex = load_lexicon(paths::data("lexicon_expanded.json"));
  const auto kw = compute_coverage(corpus, lex, Granularity::Keyword);
  const auto g = build_graph(corpus, lex, aggregate_by_topic(kw, lex), kw);
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& t : g.with_predicate(Vocabulary().term("sharesTopicWith")))
    edges.insert({t.subject.str(), std::get<Iri>(t.object).str()});
  for (const auto& [a, b] : edges) {
    CHECK(a != b);
    CHECK(edges.count({b, a}) == 1);
  }
}

TEST_CASE("empty matrices give no coverage triples") {
  const MiniGraph m;
  CoverageMatrix zt(Granularity::Topic, m.topic.row_ids(), m.topic.column_ids());
  CoverageMatrix zk(Granularity::Keyword, m.kw.row_ids(), m.kw.column_ids());
  const auto g = build_graph(m.corpus, m.lexicon, zt, zk);
  CHECK(count_predicate(g, "coversTopic") == 0);
  CHECK(count_predicate(g, "sharesTopicWith") == 0);
  CHECK(count_predicate(g, "mentionsKeyword") == 0);
  CHECK(g.size() == m.graph.size() - 10 - 17 - 2);
  CHECK_THROWS_AS(build_graph(m.corpus, m.lexicon, zk, zt), ValidationError);
}

TEST_CASE("N-Triples output parses independently and round-trips") {
  const MiniGraph m;
  const std::string nt = serialize_ntriples(m.graph);
  CHECK(nt.back() == '\n');
  CHECK(nt.find('\r') == std::string::npos);
  const auto parsed = ntcheck::parse(nt);
  REQUIRE_MESSAGE(parsed.ok(), parsed.error);
  CHECK(parsed.statements.size() == m.graph.size());
  CHECK(ntcheck::serialize(parsed.statements) == nt);

  // Rebuild the library graph from the parsed statements.
  LinkGraph rebuilt;
  for (const auto& s : parsed.statements) {
    const Iri subj(s.subject.value), pred(s.predicate.value);
    if (s.object.kind == ntcheck::Term::Iri)
      rebuilt.add(subj, pred, Iri(s.object.value));
    else
      rebuilt.add(subj, pred, Literal{s.object.value, s.object.language});
  }
  CHECK(rebuilt == m.graph);
  CHECK(serialize_ntriples(rebuilt) == nt);
}

TEST_CASE("escapes survive the round trip") {
  LinkGraph g;
  g.add(Iri("http://x/s"), Iri("http://x/p"), Literal{"quote \" back \\ nl \n tab \t cr \r del \x7f é", "en-GB"});
  const std::string nt = serialize_ntriples(g);
  const auto parsed = ntcheck::parse(nt);
  REQUIRE(parsed.ok());
  CHECK(parsed.statements[0].object.value == "quote \" back \\ nl \n tab \t cr \r del \x7f é");
  CHECK(parsed.statements[0].object.language == "en-GB");
  CHECK(ntcheck::serialize(parsed.statements) == nt);
}

TEST_CASE("the checker rejects malformed documents") {
  CHECK_FALSE(ntcheck::parse("<http://x/s> <http://x/p> <http://x/o>\n").ok());
  CHECK_FALSE(ntcheck::parse("<http://x/s> <http://x/p> \"open .\n").ok());
  CHECK_FALSE(ntcheck::parse("<rel> <http://x/p> <http://x/o> .\n").ok());
  CHECK_FALSE(ntcheck::parse("<http://x/s> \"lit\" <http://x/o> .\n").ok());
  CHECK_FALSE(ntcheck::parse("<http://x/s> <http://x/p> \"a\"@ .\n").ok());
  CHECK_FALSE(ntcheck::parse("<http://x/ s> <http://x/p> <http://x/o> .\n").ok());
  CHECK_FALSE(ntcheck::parse("<http://x/s> <http://x/p> \"\\q\" .\n").ok());
  CHECK(ntcheck::parse("# comment\n\n_:b1 <http://x/p> \"v\"^^<http://x/t> . # trailing\n").ok());
  CHECK(ntcheck::parse("<http://x/s> <http://x/p> \"\\u00E9\\U0001F600\" .").ok());
}

TEST_CASE("Turtle output") {
  const MiniGraph m;
  const std::string ttl = serialize_turtle(m.graph);
  CHECK(ttl.rfind("@prefix laip: <http://linking-ai-principles.example/ontology#> .\n", 0) == 0);
  CHECK(ttl.find("@prefix owl: <http://www.w3.org/2002/07/owl#> .\n") != std::string::npos);
  CHECK(ttl.find("laip:sharesTopicWith a owl:ObjectProperty , ") == std::string::npos);
  CHECK(ttl.find("<http://linking-ai-principles.example/proposal/mini-a> a laip:Proposal ;\n") != std::string::npos);
  CHECK(ttl.find("laip:coversTopic <http://linking-ai-principles.example/topic/Safety>") != std::string::npos);
  CHECK(serialize_turtle(m.graph) == ttl);
  // One statement block per distinct subject.
  std::set<std::string> subjects;
  for (const auto& t : m.graph.triples()) subjects.insert(t.subject.str());
  std::size_t blocks = 0;
  for (std::size_t pos = 0; (pos = ttl.find(" .\n", pos)) != std::string::npos; pos += 3) ++blocks;
  CHECK(blocks == subjects.size() + 4);
}

TEST_CASE("custom base IRI") {
  const MiniGraph m;
  const Vocabulary v("https://example.org/laip/");
  const auto g = build_graph(m.corpus, m.lexicon, m.topic, m.kw, v);
  const std::string nt = serialize_ntriples(g);
  CHECK(nt.find("linking-ai-principles.example") == std::string::npos);
  CHECK(nt.find("<https://example.org/laip/proposal/mini-a>") != std::string::npos);
  CHECK(g.size() == m.graph.size());
}
