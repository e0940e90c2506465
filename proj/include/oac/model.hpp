#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "oac/datetime.hpp"
#include "oac/rdf.hpp"
#include "oac/vocabulary.hpp"

namespace oac {

using rdf::Iri;

// --- constraints ---

struct SvgConstraint {
  Iri id;
  std::string svgSource;
  friend bool operator==(const SvgConstraint&, const SvgConstraint&) = default;
};

struct TimeConstraint {
  Iri id;
  DateTime when;
  friend bool operator==(const TimeConstraint&, const TimeConstraint&) = default;
};

/// Any other constraint type; properties are single-valued and exclude rdf:type.
struct GenericConstraint {
  Iri id;
  Iri type;
  std::map<Iri, rdf::Term> properties;
  friend bool operator==(const GenericConstraint&, const GenericConstraint&) = default;
};

using Constraint = std::variant<SvgConstraint, TimeConstraint, GenericConstraint>;

const Iri& constraintId(const Constraint& c);

// --- body ---

struct ExternalBody {
  Iri uri;
  friend bool operator==(const ExternalBody&, const ExternalBody&) = default;
};

/// Text carried in the annotation document itself (cnt:ContentAsText).
struct InlineBody {
  Iri id;
  std::string chars;
  std::string encoding = "utf-8";
  friend bool operator==(const InlineBody&, const InlineBody&) = default;
};

struct Body {
  std::variant<ExternalBody, InlineBody> content;
  std::optional<TimeConstraint> timeConstraint;

  const Iri& id() const;
  const InlineBody* inlineContent() const { return std::get_if<InlineBody>(&content); }
  friend bool operator==(const Body&, const Body&) = default;
};

// --- targets ---

struct DirectTarget {
  Iri uri;
  friend bool operator==(const DirectTarget&, const DirectTarget&) = default;
};

/// A segment of `constrains`, described by `constraint`.
struct ConstrainedTarget {
  Iri id;
  Iri constrains;
  Constraint constraint;
  friend bool operator==(const ConstrainedTarget&, const ConstrainedTarget&) = default;
};

struct Target {
  std::variant<DirectTarget, ConstrainedTarget> content;
  std::optional<TimeConstraint> timeConstraint;

  /// The target node in the graph.
  const Iri& id() const;
  /// The resource the target is about: the direct URI or the constrained base.
  const Iri& resource() const;
  const ConstrainedTarget* constrained() const { return std::get_if<ConstrainedTarget>(&content); }
  friend bool operator==(const Target&, const Target&) = default;
};

// --- tags ---

struct TagLabel {
  std::string text;
  std::optional<std::string> lang;
  friend auto operator<=>(const TagLabel&, const TagLabel&) = default;
};

/// A Linked Data resource linked from the Body, with labels cached at attach time.
struct SemanticTag {
  Iri resource;
  std::vector<TagLabel> labels;
  friend bool operator==(const SemanticTag&, const SemanticTag&) = default;
};

// --- annotation ---

struct Annotation {
  Iri uri;
  Body body;
  std::vector<Target> targets;
  std::optional<std::string> creator;
  std::optional<DateTime> created;
  std::optional<DateTime> when;
  std::vector<SemanticTag> semanticTags;
  /// Triples about the annotation node that the model does not interpret.
  rdf::Graph extras;

  /// Targets, tags and labels compare as sets.
  friend bool operator==(const Annotation& a, const Annotation& b);
};

/// Targets sorted by node id, tags by resource, labels ascending.
Annotation canonicalized(Annotation a);

// --- errors and violations ---

enum class ViolationCode {
  NotAnAnnotation,
  MissingBody,
  MultipleBodies,
  NoTargets,
  EmptyInlineBody,
  MissingEncoding,
  InvalidInlineBodyId,
  MalformedConstraint,
  InvalidSvgConstraint,
  MisplacedTimeConstraint,
  DuplicateNodeId,
  MalformedProperty,
  AmbiguousTemporalClass,
};

std::string_view toString(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string node;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Raised when a graph cannot be read as an annotation, or an operation's
/// precondition on the annotation fails.
class ModelError : public std::runtime_error {
 public:
  ModelError(ViolationCode code, std::string node, const std::string& message);
  ViolationCode code() const { return code_; }
  const std::string& node() const { return node_; }
  Violation violation() const { return {code_, node_, what()}; }

 private:
  ViolationCode code_;
  std::string node_;
};

// --- equivalence ---

class EquivalenceError : public std::runtime_error {
 public:
  enum class Kind { NotAUrn, NotDereferenceable, ConflictingBinding };
  EquivalenceError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// URN -> HTTP URI bindings asserted by a publishing server.
class EquivalenceMap {
 public:
  const std::map<Iri, Iri>& bindings() const { return bindings_; }
  std::optional<Iri> lookup(const Iri& urn) const;
  bool empty() const { return bindings_.empty(); }
  friend bool operator==(const EquivalenceMap&, const EquivalenceMap&) = default;

 private:
  friend EquivalenceMap registerEquivalence(EquivalenceMap m, const Iri& urn, const Iri& httpUri);
  std::map<Iri, Iri> bindings_;
};

/// Rebinding a URN to the IRI it already has is accepted and changes nothing.
EquivalenceMap registerEquivalence(EquivalenceMap m, const Iri& urn, const Iri& httpUri);

/// Replaces bound URNs used as annotation, body, target or constraint ids.
Annotation resolveReferences(Annotation a, const EquivalenceMap& m);

/// Applies the map to every IRI in the graph, leaving owl:sameAs statements as written.
rdf::Graph rewriteGraph(const rdf::Graph& g, const EquivalenceMap& m);

/// owl:sameAs statements in the graph, as a map. Throws EquivalenceError on conflicts.
EquivalenceMap equivalencesFromGraph(const rdf::Graph& g);

// --- graph mapping ---

rdf::Graph annotationToGraph(const Annotation& a, const Vocabulary& v = Vocabulary::standard());
/// Also emits (urn owl:sameAs http) for bindings that touch the annotation's nodes.
rdf::Graph annotationToGraph(const Annotation& a, const EquivalenceMap& m,
                             const Vocabulary& v = Vocabulary::standard());

/// Throws ModelError (MissingBody, MultipleBodies, NoTargets, MalformedConstraint,
/// MalformedProperty) naming the offending node.
Annotation annotationFromGraph(const rdf::Graph& g, const Iri& annotationUri,
                               const Vocabulary& v = Vocabulary::standard());

/// Subjects typed as annotations, ascending.
std::vector<Iri> findAnnotations(const rdf::Graph& g, const Vocabulary& v = Vocabulary::standard());

// --- validation and temporal classes ---

std::vector<Violation> validate(const Annotation& a);

/// Collects body/target cardinality problems from the graph before reading it.
std::vector<Violation> validateGraph(const rdf::Graph& g, const Iri& annotationUri,
                                     const Vocabulary& v = Vocabulary::standard());

struct Timeless {
  friend bool operator==(const Timeless&, const Timeless&) = default;
};
struct Uniform {
  DateTime when;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};
struct Varied {
  std::optional<DateTime> bodyWhen;
  std::vector<std::optional<DateTime>> targetWhens;
  friend bool operator==(const Varied&, const Varied&) = default;
};
using TemporalClass = std::variant<Timeless, Uniform, Varied>;

std::string_view temporalClassName(const TemporalClass& c);

/// Throws ModelError(AmbiguousTemporalClass) when both an annotation-level
/// datetime and time constraints are present.
TemporalClass classifyTemporal(const Annotation& a);

// --- semantic tags ---

/// Dereferences a tag resource and returns its labels. Throws on failure.
using TagResolver = std::function<std::vector<TagLabel>(const Iri&)>;

TagResolver noopTagResolver();
/// Labels are the rdfs:label literals of the resource in `g`.
TagResolver graphTagResolver(rdf::Graph g);

struct ResolverFailure {
  Iri resource;
  std::string message;
};

struct TagAttachment {
  Annotation annotation;
  std::optional<ResolverFailure> failure;
};

/// Attaching a resource that is already tagged is a no-op.
TagAttachment attachSemanticTag(Annotation a, const Iri& resource, const TagResolver& resolver);

}  // namespace oac
