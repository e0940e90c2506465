#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oac/datetime.hpp"

namespace oac::rdf {

class InvalidTerm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An absolute IRI. Construction validates that a scheme is present.
class Iri {
 public:
  explicit Iri(std::string value);
  static std::optional<Iri> tryParse(std::string_view value);

  const std::string& str() const { return value_; }
  std::string_view scheme() const;
  bool isDereferenceable() const;
  bool isUrn() const;

  friend auto operator<=>(const Iri&, const Iri&) = default;

 private:
  struct Unchecked {};
  Iri(Unchecked, std::string value) : value_(std::move(value)) {}
  std::string value_;
};

class Literal {
 public:
  explicit Literal(std::string lexical) : lexical_(std::move(lexical)) {}
  Literal(std::string lexical, Iri datatype)
      : lexical_(std::move(lexical)), datatype_(std::move(datatype)) {}
  static Literal withLanguage(std::string lexical, std::string lang);
  static Literal dateTime(DateTime dt);

  const std::string& lexical() const { return lexical_; }
  const std::optional<Iri>& datatype() const { return datatype_; }
  const std::optional<std::string>& language() const { return lang_; }

  /// The datetime value when this is an xsd:dateTime literal in wire form.
  std::optional<DateTime> asDateTime() const;

  friend auto operator<=>(const Literal&, const Literal&) = default;

 private:
  std::string lexical_;
  std::optional<Iri> datatype_;
  std::optional<std::string> lang_;
};

class BlankNode {
 public:
  /// Label must match [A-Za-z0-9]+.
  explicit BlankNode(std::string label);
  const std::string& label() const { return label_; }
  friend auto operator<=>(const BlankNode&, const BlankNode&) = default;

 private:
  std::string label_;
};

using Term = std::variant<Iri, Literal, BlankNode>;

inline bool isIri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool isLiteral(const Term& t) { return std::holds_alternative<Literal>(t); }
inline bool isBlank(const Term& t) { return std::holds_alternative<BlankNode>(t); }
inline const Iri* asIri(const Term& t) { return std::get_if<Iri>(&t); }
inline const Literal* asLiteral(const Term& t) { return std::get_if<Literal>(&t); }

/// N-Triples form of a single term (ASCII, escaped).
std::string toNTriples(const Term& term);

struct Triple {
  Triple(Term subject, Iri predicate, Term object);

  Term subject;
  Iri predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

namespace detail {
struct SubjectKey {
  const Term& subject;
};
struct SubjectPredicateKey {
  const Term& subject;
  const Iri& predicate;
};
struct TripleOrder {
  using is_transparent = void;
  bool operator()(const Triple& a, const Triple& b) const { return a < b; }
  bool operator()(const Triple& a, SubjectKey k) const { return a.subject < k.subject; }
  bool operator()(SubjectKey k, const Triple& a) const { return k.subject < a.subject; }
  bool operator()(const Triple& a, SubjectPredicateKey k) const {
    if (a.subject != k.subject) return a.subject < k.subject;
    return a.predicate < k.predicate;
  }
  bool operator()(SubjectPredicateKey k, const Triple& a) const {
    if (k.subject != a.subject) return k.subject < a.subject;
    return k.predicate < a.predicate;
  }
};
}  // namespace detail

/// A set of triples.
class Graph {
 public:
  using Set = std::set<Triple, detail::TripleOrder>;
  using const_iterator = Set::const_iterator;

  Graph() = default;
  Graph(std::initializer_list<Triple> triples) : triples_(triples) {}

  /// Returns false when the triple was already present.
  bool insert(Triple t) { return triples_.insert(std::move(t)).second; }
  void insert(const Graph& other) { triples_.insert(other.begin(), other.end()); }
  bool erase(const Triple& t) { return triples_.erase(t) > 0; }
  bool contains(const Triple& t) const { return triples_.count(t) > 0; }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const_iterator begin() const { return triples_.begin(); }
  const_iterator end() const { return triples_.end(); }

  std::vector<Triple> about(const Term& subject) const;
  std::vector<Term> objects(const Term& subject, const Iri& predicate) const;
  std::vector<Term> subjects(const Iri& predicate, const Term& object) const;
  bool hasType(const Term& subject, const Iri& type) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Set triples_;
};

/// True when the graphs are equal up to a bijection of blank node labels.
bool isomorphic(const Graph& a, const Graph& b);

enum class Format { NTriples, Turtle };

std::string_view mediaType(Format f);
std::optional<Format> formatFromMediaType(std::string_view mediaType);
/// `.nt` selects N-Triples, `.ttl` Turtle.
std::optional<Format> formatFromPath(std::string_view path);

class NamespaceTable {
 public:
  /// oac, cnt, dcterms, rdf, rdfs, xsd, owl.
  static const NamespaceTable& standard();

  void bind(std::string prefix, std::string ns);
  std::optional<std::string> lookup(std::string_view prefix) const;
  Iri expand(std::string_view prefixedName) const;
  /// `prefix:local` when a bound namespace covers the IRI with a plain local name.
  std::optional<std::string> compact(const Iri& iri) const;
  const std::map<std::string, std::string, std::less<>>& entries() const { return map_; }

 private:
  std::map<std::string, std::string, std::less<>> map_;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownPrefix, RelativeIri };
  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

Graph parse(std::string_view text, Format format);

/// N-Triples output is canonical: blank nodes relabelled `_:bN`, lines sorted bytewise.
/// Turtle output prefixes names with `namespaces` and groups by subject.
std::string serialize(const Graph& graph, Format format,
                      const NamespaceTable& namespaces = NamespaceTable::standard());

namespace detail {
std::string escapeString(std::string_view utf8);
std::string escapeIri(std::string_view utf8);
void appendUtf8(std::string& out, char32_t cp);
}  // namespace detail

}  // namespace oac::rdf
