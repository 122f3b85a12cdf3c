#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "laip/analysis.hpp"
#include "laip/corpus.hpp"
#include "laip/lexicon.hpp"

namespace laip::rdf {

/// Absolute IRI. Construction validates that a scheme is present and that
/// no whitespace or characters excluded from IRIREF occur.
class Iri {
 public:
  explicit Iri(std::string value);
  const std::string& str() const noexcept { return value_; }
  auto operator<=>(const Iri&) const = default;

 private:
  std::string value_;
};

struct Literal {
  std::string text;
  std::string language;  // empty: plain string literal

  auto operator<=>(const Literal&) const = default;
};

using Object = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Object object;

  bool operator==(const Triple&) const = default;
};

std::string to_ntriples(const Iri& iri);
std::string to_ntriples(const Literal& literal);
std::string to_ntriples(const Object& object);
std::string to_ntriples(const Triple& triple);

/// Deduplicated triples in canonical (subject, predicate, object) order of
/// their N-Triples forms.
class LinkGraph {
 public:
  void add(Triple triple);
  void add(const Iri& s, const Iri& p, Object o) { add(Triple{s, p, std::move(o)}); }

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  bool contains(const Triple& t) const;
  std::vector<Triple> triples() const;
  /// Triples with the given predicate, in canonical order.
  std::vector<Triple> with_predicate(const Iri& predicate) const;

  bool operator==(const LinkGraph&) const = default;

 private:
  using Key = std::array<std::string, 3>;
  std::map<Key, Triple> triples_;
};

inline constexpr std::string_view kDefaultBaseIri = "http://linking-ai-principles.example/";

inline constexpr std::string_view kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwlNs = "http://www.w3.org/2002/07/owl#";

/// IRIs minted for corpus and lexicon entities under one base.
class Vocabulary {
 public:
  explicit Vocabulary(std::string base = std::string(kDefaultBaseIri));

  const std::string& base() const noexcept { return base_; }
  std::string ontology_ns() const { return base_ + "ontology#"; }

  Iri term(std::string_view local) const { return Iri(ontology_ns() + std::string(local)); }
  Iri proposal(std::string_view id) const;
  Iri item(std::string_view proposal_id, std::string_view item_id) const;
  Iri topic(std::string_view name) const;
  Iri keyword(std::string_view canonical) const;
  Iri variant(std::string_view canonical, std::string_view text) const;

 private:
  std::string base_;
};

/// Percent-encodes everything outside the RFC 3986 unreserved set.
std::string iri_escape(std::string_view text);

/// The linkage graph: ontology declarations, typed entities with labels,
/// coversTopic / mentionsKeyword for nonzero cells, lexicon structure and
/// sharesTopicWith in both directions for proposals with a common topic.
LinkGraph build_graph(const Corpus& corpus, const Lexicon& lexicon, const CoverageMatrix& topic_matrix,
                      const CoverageMatrix& keyword_matrix, const Vocabulary& vocab = Vocabulary());

std::string serialize_ntriples(const LinkGraph& graph);
std::string serialize_turtle(const LinkGraph& graph, const Vocabulary& vocab = Vocabulary());

}  // namespace laip::rdf
