#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ntcheck {

/// One parsed term. Escapes are decoded.
struct Term {
  enum Kind { Iri, Blank, Literal } kind = Iri;
  std::string value;
  std::string language;
  std::string datatype;
};

struct Statement {
  Term subject;
  Term predicate;
  Term object;
};

struct ParseResult {
  std::vector<Statement> statements;
  /// First failure as "line N: reason"; empty when the document is valid.
  std::string error;
  bool ok() const { return error.empty(); }
};

/// Recursive-descent parser for the W3C N-Triples grammar.
ParseResult parse(std::string_view document);

/// Canonical line form: escapes only `"`, `\`, LF, CR, TAB and other C0/DEL
/// controls (as \uXXXX); one space between terms.
std::string serialize(const std::vector<Statement>& statements);

}  // namespace ntcheck
