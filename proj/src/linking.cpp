#include "laip/linking.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "laip/error.hpp"

namespace laip::rdf {

namespace {

bool iri_char_ok(unsigned char c) {
  if (c <= 0x20) return false;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
      return false;
    default:
      return true;
  }
}

bool has_scheme(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (!(std::isalnum(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  return true;
}

bool valid_language(std::string_view tag) {
  if (tag.empty()) return true;
  std::size_t i = 0;
  while (i < tag.size() && std::isalpha(static_cast<unsigned char>(tag[i]))) ++i;
  if (i == 0) return false;
  while (i < tag.size()) {
    if (tag[i] != '-') return false;
    const std::size_t start = ++i;
    while (i < tag.size() && std::isalnum(static_cast<unsigned char>(tag[i]))) ++i;
    if (i == start) return false;
  }
  return true;
}

std::string escape_literal(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!has_scheme(value_)) throw ValidationError("IRI is not absolute: '" + value_ + "'");
  for (char c : value_)
    if (!iri_char_ok(static_cast<unsigned char>(c))) throw ValidationError("IRI contains an illegal character: '" + value_ + "'");
}

std::string to_ntriples(const Iri& iri) { return "<" + iri.str() + ">"; }

std::string to_ntriples(const Literal& literal) {
  std::string out = "\"" + escape_literal(literal.text) + "\"";
  if (!literal.language.empty()) out += "@" + literal.language;
  return out;
}

std::string to_ntriples(const Object& object) {
  return std::visit([](const auto& o) { return to_ntriples(o); }, object);
}

std::string to_ntriples(const Triple& t) {
  return to_ntriples(t.subject) + " " + to_ntriples(t.predicate) + " " + to_ntriples(t.object) + " .\n";
}

void LinkGraph::add(Triple triple) {
  if (const auto* lit = std::get_if<Literal>(&triple.object); lit && !valid_language(lit->language))
    throw ValidationError("invalid language tag '" + lit->language + "'");
  Key key{to_ntriples(triple.subject), to_ntriples(triple.predicate), to_ntriples(triple.object)};
  triples_.try_emplace(std::move(key), std::move(triple));
}

bool LinkGraph::contains(const Triple& t) const {
  return triples_.count({to_ntriples(t.subject), to_ntriples(t.predicate), to_ntriples(t.object)}) > 0;
}

std::vector<Triple> LinkGraph::triples() const {
  std::vector<Triple> out;
  out.reserve(triples_.size());
  for (const auto& [_, t] : triples_) out.push_back(t);
  return out;
}

std::vector<Triple> LinkGraph::with_predicate(const Iri& predicate) const {
  std::vector<Triple> out;
  for (const auto& [_, t] : triples_)
    if (t.predicate == predicate) out.push_back(t);
  return out;
}

std::string iri_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) && c < 0x80) {
      out += ch;
    } else if (ch == '-' || ch == '.' || ch == '_' || ch == '~') {
      out += ch;
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::string base) : base_(std::move(base)) {
  if (base_.empty() || (base_.back() != '/' && base_.back() != '#')) base_ += '/';
  Iri check(base_);
}

Iri Vocabulary::proposal(std::string_view id) const { return Iri(base_ + "proposal/" + iri_escape(id)); }

Iri Vocabulary::item(std::string_view proposal_id, std::string_view item_id) const {
  return Iri(base_ + "proposal/" + iri_escape(proposal_id) + "/item/" + iri_escape(item_id));
}

Iri Vocabulary::topic(std::string_view name) const { return Iri(base_ + "topic/" + iri_escape(name)); }

Iri Vocabulary::keyword(std::string_view canonical) const { return Iri(base_ + "keyword/" + iri_escape(canonical)); }

Iri Vocabulary::variant(std::string_view canonical, std::string_view text) const {
  return Iri(base_ + "keyword/" + iri_escape(canonical) + "/variant/" + iri_escape(text));
}

LinkGraph build_graph(const Corpus& corpus, const Lexicon& lexicon, const CoverageMatrix& topic_matrix,
                      const CoverageMatrix& keyword_matrix, const Vocabulary& vocab) {
  if (topic_matrix.granularity() != Granularity::Topic || keyword_matrix.granularity() != Granularity::Keyword)
    throw ValidationError("build_graph expects a topic and a keyword matrix");
  const Iri type(std::string(kRdfNs) + "type");
  const Iri label(std::string(kRdfsNs) + "label");
  const Iri owl_class(std::string(kOwlNs) + "Class");
  const Iri owl_object(std::string(kOwlNs) + "ObjectProperty");
  const Iri owl_datatype(std::string(kOwlNs) + "DatatypeProperty");
  const Iri owl_symmetric(std::string(kOwlNs) + "SymmetricProperty");

  const Iri c_proposal = vocab.term("Proposal"), c_item = vocab.term("PrincipleItem"), c_topic = vocab.term("Topic"),
            c_group = vocab.term("KeywordGroup");
  const Iri covers = vocab.term("coversTopic"), mentions = vocab.term("mentionsKeyword"),
            has_keyword = vocab.term("hasKeyword"), variant_of = vocab.term("variantOf"),
            shares = vocab.term("sharesTopicWith"), has_item = vocab.term("hasItem"),
            publisher_type = vocab.term("publisherType"), title = vocab.term("title");

  LinkGraph g;
  for (const Iri* c : {&c_proposal, &c_item, &c_topic, &c_group}) g.add(*c, type, owl_class);
  for (const Iri* p : {&covers, &mentions, &has_keyword, &variant_of, &shares, &has_item}) g.add(*p, type, owl_object);
  g.add(shares, type, owl_symmetric);
  for (const Iri* p : {&publisher_type, &title}) g.add(*p, type, owl_datatype);

  for (const auto& p : corpus.proposals()) {
    const Iri pi = vocab.proposal(p.id);
    g.add(pi, type, c_proposal);
    g.add(pi, title, Literal{p.title, "en"});
    g.add(pi, publisher_type, Literal{std::string(to_string(p.publisher_type)), ""});
    for (const auto& item : p.items) {
      const Iri ii = vocab.item(p.id, item.item_id);
      g.add(pi, has_item, ii);
      g.add(ii, type, c_item);
      g.add(ii, title, Literal{item.title_text, "en"});
    }
  }
  for (const auto& t : lexicon.topics()) {
    const Iri ti = vocab.topic(t.name);
    g.add(ti, type, c_topic);
    g.add(ti, label, Literal{t.name, "en"});
    for (const auto& grp : t.groups) {
      const Iri gi = vocab.keyword(grp.canonical);
      g.add(ti, has_keyword, gi);
      g.add(gi, type, c_group);
      g.add(gi, label, Literal{grp.canonical, "en"});
      for (const auto& v : grp.variants) {
        const Iri vi = vocab.variant(grp.canonical, v.text);
        g.add(vi, variant_of, gi);
        g.add(vi, label, Literal{v.text, "en"});
      }
    }
  }

  std::vector<std::set<std::size_t>> topics_of(topic_matrix.rows());
  for (std::size_t r = 0; r < topic_matrix.rows(); ++r)
    for (std::size_t c = 0; c < topic_matrix.columns(); ++c)
      if (topic_matrix.at(r, c) > 0) {
        g.add(vocab.proposal(topic_matrix.row_ids()[r]), covers, vocab.topic(topic_matrix.column_ids()[c]));
        topics_of[r].insert(c);
      }
  for (std::size_t r = 0; r < keyword_matrix.rows(); ++r)
    for (std::size_t c = 0; c < keyword_matrix.columns(); ++c)
      if (keyword_matrix.at(r, c) > 0)
        g.add(vocab.proposal(keyword_matrix.row_ids()[r]), mentions, vocab.keyword(keyword_matrix.column_ids()[c]));

  for (std::size_t a = 0; a < topics_of.size(); ++a)
    for (std::size_t b = a + 1; b < topics_of.size(); ++b) {
      const bool common = std::any_of(topics_of[a].begin(), topics_of[a].end(),
                                      [&](std::size_t c) { return topics_of[b].count(c) > 0; });
      if (!common) continue;
      const Iri pa = vocab.proposal(topic_matrix.row_ids()[a]), pb = vocab.proposal(topic_matrix.row_ids()[b]);
      g.add(pa, shares, pb);
      g.add(pb, shares, pa);
    }
  return g;
}

std::string serialize_ntriples(const LinkGraph& graph) {
  std::string out;
  for (const auto& t : graph.triples()) out += to_ntriples(t);
  return out;
}

namespace {

struct Prefix {
  std::string name;
  std::string ns;
};

bool valid_local(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

std::string turtle_iri(const Iri& iri, const std::vector<Prefix>& prefixes) {
  for (const auto& p : prefixes) {
    if (iri.str().size() > p.ns.size() && iri.str().compare(0, p.ns.size(), p.ns) == 0) {
      const std::string_view local = std::string_view(iri.str()).substr(p.ns.size());
      if (valid_local(local)) return p.name + ":" + std::string(local);
    }
  }
  return to_ntriples(iri);
}

}  // namespace

std::string serialize_turtle(const LinkGraph& graph, const Vocabulary& vocab) {
  const std::vector<Prefix> prefixes = {{"laip", vocab.ontology_ns()},
                                        {"owl", std::string(kOwlNs)},
                                        {"rdf", std::string(kRdfNs)},
                                        {"rdfs", std::string(kRdfsNs)}};
  std::string out;
  for (const auto& p : prefixes) out += "@prefix " + p.name + ": <" + p.ns + "> .\n";
  const std::string rdf_type = std::string(kRdfNs) + "type";

  // Canonical order, except that rdf:type leads each subject block.
  auto triples = graph.triples();
  for (auto run = triples.begin(); run != triples.end();) {
    auto end = std::find_if(run, triples.end(), [&](const Triple& t) { return !(t.subject == run->subject); });
    std::stable_partition(run, end, [&](const Triple& t) { return t.predicate.str() == rdf_type; });
    run = end;
  }
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    const bool new_subject = i == 0 || !(triples[i - 1].subject == t.subject);
    if (new_subject) {
      out += "\n" + turtle_iri(t.subject, prefixes) + " ";
    } else {
      out += " ;\n    ";
    }
    out += t.predicate.str() == rdf_type ? std::string("a") : turtle_iri(t.predicate, prefixes);
    out += " ";
    if (const auto* iri = std::get_if<Iri>(&t.object))
      out += turtle_iri(*iri, prefixes);
    else
      out += to_ntriples(std::get<Literal>(t.object));
    const bool last_of_subject = i + 1 == triples.size() || !(triples[i + 1].subject == t.subject);
    if (last_of_subject) out += " .\n";
  }
  return out;
}

}  // namespace laip::rdf
