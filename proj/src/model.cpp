#include "oac/model.hpp"

#include <algorithm>
#include <set>

#include "oac/segments.hpp"

namespace oac {

using rdf::Graph;
using rdf::Literal;
using rdf::Term;
using rdf::Triple;

const Iri& constraintId(const Constraint& c) {
  return std::visit([](const auto& x) -> const Iri& { return x.id; }, c);
}

const Iri& Body::id() const {
  if (const auto* e = std::get_if<ExternalBody>(&content)) return e->uri;
  return std::get<InlineBody>(content).id;
}

const Iri& Target::id() const {
  if (const auto* d = std::get_if<DirectTarget>(&content)) return d->uri;
  return std::get<ConstrainedTarget>(content).id;
}

const Iri& Target::resource() const {
  if (const auto* d = std::get_if<DirectTarget>(&content)) return d->uri;
  return std::get<ConstrainedTarget>(content).constrains;
}

Annotation canonicalized(Annotation a) {
  std::stable_sort(a.targets.begin(), a.targets.end(),
                   [](const Target& x, const Target& y) { return x.id() < y.id(); });
  for (auto& tag : a.semanticTags) {
    std::sort(tag.labels.begin(), tag.labels.end());
    tag.labels.erase(std::unique(tag.labels.begin(), tag.labels.end()), tag.labels.end());
  }
  std::stable_sort(a.semanticTags.begin(), a.semanticTags.end(),
                   [](const SemanticTag& x, const SemanticTag& y) { return x.resource < y.resource; });
  return a;
}

bool operator==(const Annotation& lhs, const Annotation& rhs) {
  Annotation a = canonicalized(lhs);
  Annotation b = canonicalized(rhs);
  return a.uri == b.uri && a.body == b.body && a.targets == b.targets && a.creator == b.creator &&
         a.created == b.created && a.when == b.when && a.semanticTags == b.semanticTags &&
         a.extras == b.extras;
}

std::string_view toString(ViolationCode code) {
  switch (code) {
    case ViolationCode::NotAnAnnotation: return "NotAnAnnotation";
    case ViolationCode::MissingBody: return "MissingBody";
    case ViolationCode::MultipleBodies: return "MultipleBodies";
    case ViolationCode::NoTargets: return "NoTargets";
    case ViolationCode::EmptyInlineBody: return "EmptyInlineBody";
    case ViolationCode::MissingEncoding: return "MissingEncoding";
    case ViolationCode::InvalidInlineBodyId: return "InvalidInlineBodyId";
    case ViolationCode::MalformedConstraint: return "MalformedConstraint";
    case ViolationCode::InvalidSvgConstraint: return "InvalidSvgConstraint";
    case ViolationCode::MisplacedTimeConstraint: return "MisplacedTimeConstraint";
    case ViolationCode::DuplicateNodeId: return "DuplicateNodeId";
    case ViolationCode::MalformedProperty: return "MalformedProperty";
    case ViolationCode::AmbiguousTemporalClass: return "AmbiguousTemporalClass";
  }
  return "Unknown";
}

ModelError::ModelError(ViolationCode code, std::string node, const std::string& message)
    : std::runtime_error(std::string(toString(code)) + " at " + node + ": " + message),
      code_(code),
      node_(std::move(node)) {}

// --- equivalence ---

std::optional<Iri> EquivalenceMap::lookup(const Iri& urn) const {
  auto it = bindings_.find(urn);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

EquivalenceMap registerEquivalence(EquivalenceMap m, const Iri& urn, const Iri& httpUri) {
  using K = EquivalenceError::Kind;
  if (!urn.isUrn()) throw EquivalenceError(K::NotAUrn, "not a URN: " + urn.str());
  if (!httpUri.isDereferenceable()) {
    throw EquivalenceError(K::NotDereferenceable, "not an HTTP URI: " + httpUri.str());
  }
  auto [it, inserted] = m.bindings_.try_emplace(urn, httpUri);
  if (!inserted && it->second != httpUri) {
    throw EquivalenceError(K::ConflictingBinding, urn.str() + " is already bound to " +
                                                      it->second.str());
  }
  return m;
}

namespace {

Iri substitute(const Iri& iri, const EquivalenceMap& m) {
  if (!iri.isUrn()) return iri;
  return m.lookup(iri).value_or(iri);
}

void substituteIn(Constraint& c, const EquivalenceMap& m) {
  std::visit([&](auto& x) { x.id = substitute(x.id, m); }, c);
}

}  // namespace

Annotation resolveReferences(Annotation a, const EquivalenceMap& m) {
  if (m.empty()) return a;
  a.uri = substitute(a.uri, m);
  if (auto* e = std::get_if<ExternalBody>(&a.body.content)) {
    e->uri = substitute(e->uri, m);
  } else {
    auto& in = std::get<InlineBody>(a.body.content);
    in.id = substitute(in.id, m);
  }
  if (a.body.timeConstraint) a.body.timeConstraint->id = substitute(a.body.timeConstraint->id, m);
  for (auto& t : a.targets) {
    if (auto* d = std::get_if<DirectTarget>(&t.content)) {
      d->uri = substitute(d->uri, m);
    } else {
      auto& ct = std::get<ConstrainedTarget>(t.content);
      ct.id = substitute(ct.id, m);
      ct.constrains = substitute(ct.constrains, m);
      substituteIn(ct.constraint, m);
    }
    if (t.timeConstraint) t.timeConstraint->id = substitute(t.timeConstraint->id, m);
  }
  return a;
}

Graph rewriteGraph(const Graph& g, const EquivalenceMap& m) {
  if (m.empty()) return g;
  const Iri sameAs(term::kOwlSameAs);
  auto sub = [&](const Term& t) -> Term {
    if (const auto* iri = rdf::asIri(t)) return substitute(*iri, m);
    return t;
  };
  Graph out;
  for (const auto& t : g) {
    if (t.predicate == sameAs) {
      out.insert(t);
    } else {
      out.insert(Triple(sub(t.subject), t.predicate, sub(t.object)));
    }
  }
  return out;
}

EquivalenceMap equivalencesFromGraph(const Graph& g) {
  const Iri sameAs(term::kOwlSameAs);
  EquivalenceMap m;
  for (const auto& t : g) {
    if (t.predicate != sameAs) continue;
    const auto* s = rdf::asIri(t.subject);
    const auto* o = rdf::asIri(t.object);
    if (!s || !o) continue;
    if (s->isUrn() && o->isDereferenceable()) {
      m = registerEquivalence(std::move(m), *s, *o);
    } else if (o->isUrn() && s->isDereferenceable()) {
      m = registerEquivalence(std::move(m), *o, *s);
    }
  }
  return m;
}

// --- to graph ---

namespace {

class GraphWriter {
 public:
  explicit GraphWriter(const Vocabulary& v) : v_(v) {}

  Graph write(const Annotation& a) {
    const Term node = a.uri;
    add(node, type_, v_.annotation);
    add(node, v_.hasBody, a.body.id());
    writeBody(a.body, a.semanticTags);
    for (const auto& t : a.targets) {
      add(node, v_.hasTarget, t.id());
      writeTarget(t);
    }
    if (a.creator) add(node, Iri(term::kDctermsCreator), Literal(*a.creator));
    if (a.created) add(node, Iri(term::kDctermsCreated), Literal::dateTime(*a.created));
    if (a.when) add(node, v_.when, Literal::dateTime(*a.when));
    g_.insert(a.extras);
    return std::move(g_);
  }

 private:
  void add(const Term& s, const Iri& p, Term o) { g_.insert(Triple(s, p, std::move(o))); }

  void writeBody(const Body& b, const std::vector<SemanticTag>& tags) {
    const Term node = b.id();
    add(node, type_, v_.body);
    if (const auto* in = b.inlineContent()) {
      add(node, type_, Iri(term::kCntContentAsText));
      add(node, Iri(term::kCntChars), Literal(in->chars));
      add(node, Iri(term::kCntCharacterEncoding), Literal(in->encoding));
    }
    if (b.timeConstraint) writeTime(node, *b.timeConstraint);
    const Iri references(term::kDctermsReferences);
    const Iri label(term::kRdfsLabel);
    for (const auto& tag : tags) {
      add(node, references, tag.resource);
      for (const auto& l : tag.labels) {
        add(tag.resource, label,
            l.lang ? Literal::withLanguage(l.text, *l.lang) : Literal(l.text));
      }
    }
  }

  void writeTarget(const Target& t) {
    const Term node = t.id();
    if (const auto* ct = t.constrained()) {
      add(node, type_, v_.constraintTarget);
      add(node, v_.constrains, ct->constrains);
      add(node, v_.constrainedBy, constraintId(ct->constraint));
      writeConstraint(ct->constraint);
    } else {
      add(node, type_, v_.target);
    }
    if (t.timeConstraint) writeTime(node, *t.timeConstraint);
  }

  void writeTime(const Term& owner, const TimeConstraint& tc) {
    add(owner, v_.constrainedBy, tc.id);
    add(tc.id, type_, v_.timeConstraint);
    add(tc.id, v_.when, Literal::dateTime(tc.when));
  }

  void writeConstraint(const Constraint& c) {
    if (const auto* svg = std::get_if<SvgConstraint>(&c)) {
      add(svg->id, type_, v_.svgConstraint);
      add(svg->id, type_, Iri(term::kCntContentAsText));
      add(svg->id, Iri(term::kCntChars), Literal(svg->svgSource));
    } else if (const auto* tc = std::get_if<TimeConstraint>(&c)) {
      add(tc->id, type_, v_.timeConstraint);
      add(tc->id, v_.when, Literal::dateTime(tc->when));
    } else {
      const auto& gc = std::get<GenericConstraint>(c);
      add(gc.id, type_, gc.type);
      for (const auto& [p, o] : gc.properties) add(gc.id, p, o);
    }
  }

  const Vocabulary& v_;
  const Iri type_{term::kRdfType};
  Graph g_;
};

}  // namespace

Graph annotationToGraph(const Annotation& a, const Vocabulary& v) { return GraphWriter(v).write(a); }

Graph annotationToGraph(const Annotation& a, const EquivalenceMap& m, const Vocabulary& v) {
  Graph g = annotationToGraph(a, v);
  std::set<Iri> nodes{a.uri, a.body.id()};
  if (a.body.timeConstraint) nodes.insert(a.body.timeConstraint->id);
  for (const auto& t : a.targets) {
    nodes.insert(t.id());
    nodes.insert(t.resource());
    if (const auto* ct = t.constrained()) nodes.insert(constraintId(ct->constraint));
    if (t.timeConstraint) nodes.insert(t.timeConstraint->id);
  }
  const Iri sameAs(term::kOwlSameAs);
  for (const auto& [urn, http] : m.bindings()) {
    if (nodes.count(urn) || nodes.count(http)) g.insert(Triple(urn, sameAs, http));
  }
  return g;
}

// --- from graph ---

namespace {

class GraphReader {
 public:
  GraphReader(const Graph& g, const Vocabulary& v) : g_(g), v_(v) {}

  Annotation read(const Iri& uri) {
    const Term node = uri;
    if (!g_.hasType(node, v_.annotation)) {
      throw ModelError(ViolationCode::NotAnAnnotation, uri.str(),
                       "node is not typed " + v_.annotation.str());
    }
    auto bodies = g_.objects(node, v_.hasBody);
    if (bodies.empty()) throw ModelError(ViolationCode::MissingBody, uri.str(), "no body link");
    if (bodies.size() > 1) {
      throw ModelError(ViolationCode::MultipleBodies, uri.str(),
                       std::to_string(bodies.size()) + " body links");
    }
    auto targets = g_.objects(node, v_.hasTarget);
    if (targets.empty()) throw ModelError(ViolationCode::NoTargets, uri.str(), "no target links");

    auto [body, tags] = readBody(namedNode(bodies.front(), uri.str(), "body"));
    Annotation a{uri, std::move(body), {}, {}, {}, {}, std::move(tags), {}};
    for (const auto& t : targets) a.targets.push_back(readTarget(namedNode(t, uri.str(), "target")));

    if (auto c = single(node, Iri(term::kDctermsCreator))) {
      const auto* lit = rdf::asLiteral(*c);
      if (!lit) throw ModelError(ViolationCode::MalformedProperty, uri.str(), "creator must be a literal");
      a.creator = lit->lexical();
    }
    a.created = datetimeProperty(node, Iri(term::kDctermsCreated));
    a.when = datetimeProperty(node, v_.when);

    const std::set<Iri> consumed{v_.hasBody, v_.hasTarget, v_.when, Iri(term::kDctermsCreator),
                                 Iri(term::kDctermsCreated)};
    const Iri type(term::kRdfType);
    for (const auto& t : g_.about(node)) {
      if (consumed.count(t.predicate)) continue;
      // Another annotation may use this one as its target or body.
      if (t.predicate == type && (t.object == Term(v_.annotation) || t.object == Term(v_.target) ||
                                  t.object == Term(v_.body))) {
        continue;
      }
      a.extras.insert(t);
    }
    return a;
  }

 private:
  Iri namedNode(const Term& t, const std::string& owner, const char* role) {
    if (const auto* iri = rdf::asIri(t)) return *iri;
    throw ModelError(ViolationCode::MalformedProperty, owner,
                     std::string(role) + " node must be named by an IRI");
  }

  std::optional<Term> single(const Term& s, const Iri& p) {
    auto values = g_.objects(s, p);
    if (values.empty()) return std::nullopt;
    if (values.size() > 1) {
      throw ModelError(ViolationCode::MalformedProperty, rdf::toNTriples(s),
                       "multiple values for " + p.str());
    }
    return values.front();
  }

  std::optional<DateTime> datetimeProperty(const Term& s, const Iri& p) {
    auto v = single(s, p);
    if (!v) return std::nullopt;
    const auto* lit = rdf::asLiteral(*v);
    auto dt = lit ? lit->asDateTime() : std::nullopt;
    if (!dt) {
      throw ModelError(ViolationCode::MalformedProperty, rdf::toNTriples(s),
                       p.str() + " must be an xsd:dateTime YYYY-MM-DDThh:mm:ssZ");
    }
    return dt;
  }

  std::string requiredText(const Iri& node, const Iri& p, ViolationCode code) {
    auto v = single(node, p);
    const auto* lit = v ? rdf::asLiteral(*v) : nullptr;
    if (!lit) throw ModelError(code, node.str(), "expected one literal " + p.str());
    return lit->lexical();
  }

  // Time constraints hanging off `owner`, plus the remaining constrainedBy nodes.
  std::pair<std::optional<TimeConstraint>, std::vector<Iri>> splitConstraints(const Iri& owner) {
    std::optional<TimeConstraint> time;
    std::vector<Iri> others;
    for (const auto& c : g_.objects(owner, v_.constrainedBy)) {
      Iri id = namedNode(c, owner.str(), "constraint");
      if (g_.hasType(id, v_.timeConstraint)) {
        if (time) {
          throw ModelError(ViolationCode::MalformedConstraint, owner.str(),
                           "more than one time constraint");
        }
        time = readTime(id);
      } else {
        others.push_back(std::move(id));
      }
    }
    return {std::move(time), std::move(others)};
  }

  TimeConstraint readTime(const Iri& id) {
    auto v = single(id, v_.when);
    const auto* lit = v ? rdf::asLiteral(*v) : nullptr;
    auto dt = lit ? lit->asDateTime() : std::nullopt;
    if (!dt) {
      throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                       "time constraint needs exactly one xsd:dateTime value");
    }
    return {id, *dt};
  }

  std::pair<Body, std::vector<SemanticTag>> readBody(const Iri& id) {
    auto [time, others] = splitConstraints(id);
    if (!others.empty()) {
      throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                       "a body may only carry a time constraint");
    }
    Body body{ExternalBody{id}, std::move(time)};
    if (!g_.objects(id, Iri(term::kCntChars)).empty()) {
      InlineBody in{id, requiredText(id, Iri(term::kCntChars), ViolationCode::MalformedProperty)};
      if (auto enc = single(id, Iri(term::kCntCharacterEncoding))) {
        const auto* lit = rdf::asLiteral(*enc);
        if (!lit) throw ModelError(ViolationCode::MalformedProperty, id.str(), "encoding must be a literal");
        in.encoding = lit->lexical();
      }
      body.content = std::move(in);
    }

    std::vector<SemanticTag> tags;
    const Iri label(term::kRdfsLabel);
    for (const auto& r : g_.objects(id, Iri(term::kDctermsReferences))) {
      const auto* res = rdf::asIri(r);
      if (!res) continue;
      SemanticTag tag{*res, {}};
      for (const auto& l : g_.objects(*res, label)) {
        if (const auto* lit = rdf::asLiteral(l)) tag.labels.push_back({lit->lexical(), lit->language()});
      }
      tags.push_back(std::move(tag));
    }
    return {std::move(body), std::move(tags)};
  }

  Target readTarget(const Iri& id) {
    auto [time, others] = splitConstraints(id);
    auto bases = g_.objects(id, v_.constrains);
    bool constrained = g_.hasType(id, v_.constraintTarget) || !bases.empty();
    if (!constrained) {
      if (!others.empty()) {
        throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                         "target has a segment constraint but constrains nothing");
      }
      return Target{DirectTarget{id}, std::move(time)};
    }
    if (bases.size() != 1 || !rdf::isIri(bases.front())) {
      throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                       "constrained target needs exactly one constrains IRI");
    }
    if (others.size() != 1) {
      throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                       "constrained target needs exactly one segment constraint, found " +
                           std::to_string(others.size()));
    }
    return Target{ConstrainedTarget{id, std::get<Iri>(bases.front()), readConstraint(others.front())},
                  std::move(time)};
  }

  Constraint readConstraint(const Iri& id) {
    if (g_.hasType(id, v_.svgConstraint)) {
      return SvgConstraint{id, requiredText(id, Iri(term::kCntChars), ViolationCode::MalformedConstraint)};
    }
    const Iri type(term::kRdfType);
    auto types = g_.objects(id, type);
    if (types.size() != 1 || !rdf::isIri(types.front())) {
      throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                       "constraint needs exactly one type");
    }
    GenericConstraint gc{id, std::get<Iri>(types.front()), {}};
    for (const auto& t : g_.about(id)) {
      if (t.predicate == type) continue;
      if (!gc.properties.emplace(t.predicate, t.object).second) {
        throw ModelError(ViolationCode::MalformedConstraint, id.str(),
                         "multiple values for " + t.predicate.str());
      }
    }
    return gc;
  }

  const Graph& g_;
  const Vocabulary& v_;
};

}  // namespace

Annotation annotationFromGraph(const Graph& g, const Iri& uri, const Vocabulary& v) {
  return GraphReader(g, v).read(uri);
}

std::vector<Iri> findAnnotations(const Graph& g, const Vocabulary& v) {
  const Iri type(term::kRdfType);
  std::vector<Iri> out;
  for (const auto& t : g.subjects(type, v.annotation)) {
    if (const auto* iri = rdf::asIri(t)) out.push_back(*iri);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- validation ---

std::vector<Violation> validate(const Annotation& a) {
  std::vector<Violation> out;
  auto report = [&](ViolationCode code, const Iri& node, std::string msg) {
    out.push_back({code, node.str(), std::move(msg)});
  };

  if (a.targets.empty()) report(ViolationCode::NoTargets, a.uri, "annotation has no targets");

  if (const auto* in = a.body.inlineContent()) {
    if (in->chars.empty()) report(ViolationCode::EmptyInlineBody, in->id, "inline body text is empty");
    if (in->encoding.empty()) report(ViolationCode::MissingEncoding, in->id, "inline body has no encoding");
    if (!in->id.isUrn() && !in->id.isDereferenceable()) {
      report(ViolationCode::InvalidInlineBodyId, in->id, "inline body id must be a URN or HTTP URI");
    }
  }

  const Vocabulary& std_ = Vocabulary::standard();
  bool timeConstraints = a.body.timeConstraint.has_value();
  std::vector<Iri> ids{a.uri, a.body.id()};
  if (a.body.timeConstraint) ids.push_back(a.body.timeConstraint->id);
  for (const auto& t : a.targets) {
    ids.push_back(t.id());
    if (t.timeConstraint) {
      timeConstraints = true;
      ids.push_back(t.timeConstraint->id);
    }
    const auto* ct = t.constrained();
    if (!ct) continue;
    ids.push_back(constraintId(ct->constraint));
    if (std::holds_alternative<TimeConstraint>(ct->constraint)) {
      report(ViolationCode::MisplacedTimeConstraint, ct->id,
             "time constraints belong in the target's time slot, not its segment constraint");
    } else if (const auto* svg = std::get_if<SvgConstraint>(&ct->constraint)) {
      try {
        parseSvgConstraint(svg->svgSource);
      } catch (const SvgError& e) {
        report(ViolationCode::InvalidSvgConstraint, svg->id, e.what());
      }
    } else {
      const auto& gc = std::get<GenericConstraint>(ct->constraint);
      if (gc.type == std_.svgConstraint || gc.type == std_.timeConstraint) {
        report(ViolationCode::MalformedConstraint, gc.id, "generic constraint uses a reserved type");
      }
      if (gc.properties.count(Iri(term::kRdfType))) {
        report(ViolationCode::MalformedConstraint, gc.id, "rdf:type is not a generic property");
      }
    }
  }

  std::set<Iri> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) report(ViolationCode::DuplicateNodeId, id, "node id used twice");
  }

  if (a.when && timeConstraints) {
    report(ViolationCode::AmbiguousTemporalClass, a.uri,
           "annotation-level datetime combined with time constraints");
  }
  return out;
}

std::vector<Violation> validateGraph(const Graph& g, const Iri& uri, const Vocabulary& v) {
  std::vector<Violation> out;
  const Term node = uri;
  if (!g.hasType(node, v.annotation)) {
    return {{ViolationCode::NotAnAnnotation, uri.str(), "node is not typed " + v.annotation.str()}};
  }
  auto bodies = g.objects(node, v.hasBody).size();
  if (bodies == 0) out.push_back({ViolationCode::MissingBody, uri.str(), "no body link"});
  if (bodies > 1) {
    out.push_back({ViolationCode::MultipleBodies, uri.str(), std::to_string(bodies) + " body links"});
  }
  if (g.objects(node, v.hasTarget).empty()) {
    out.push_back({ViolationCode::NoTargets, uri.str(), "no target links"});
  }
  if (!out.empty()) return out;
  try {
    return validate(annotationFromGraph(g, uri, v));
  } catch (const ModelError& e) {
    return {e.violation()};
  }
}

// --- temporal classes ---

std::string_view temporalClassName(const TemporalClass& c) {
  if (std::holds_alternative<Timeless>(c)) return "Timeless";
  if (std::holds_alternative<Uniform>(c)) return "Uniform";
  return "Varied";
}

TemporalClass classifyTemporal(const Annotation& a) {
  bool constrained = a.body.timeConstraint.has_value() ||
                     std::any_of(a.targets.begin(), a.targets.end(),
                                 [](const Target& t) { return t.timeConstraint.has_value(); });
  if (a.when && constrained) {
    throw ModelError(ViolationCode::AmbiguousTemporalClass, a.uri.str(),
                     "annotation-level datetime combined with time constraints");
  }
  if (a.when) return Uniform{*a.when};
  if (!constrained) return Timeless{};
  Varied v;
  if (a.body.timeConstraint) v.bodyWhen = a.body.timeConstraint->when;
  for (const auto& t : a.targets) {
    v.targetWhens.push_back(t.timeConstraint ? std::optional(t.timeConstraint->when) : std::nullopt);
  }
  return v;
}

// --- semantic tags ---

TagResolver noopTagResolver() {
  return [](const Iri&) { return std::vector<TagLabel>{}; };
}

TagResolver graphTagResolver(Graph g) {
  return [g = std::move(g)](const Iri& resource) {
    std::vector<TagLabel> labels;
    for (const auto& l : g.objects(resource, Iri(term::kRdfsLabel))) {
      if (const auto* lit = rdf::asLiteral(l)) labels.push_back({lit->lexical(), lit->language()});
    }
    return labels;
  };
}

TagAttachment attachSemanticTag(Annotation a, const Iri& resource, const TagResolver& resolver) {
  for (const auto& tag : a.semanticTags) {
    if (tag.resource == resource) return {std::move(a), std::nullopt};
  }
  SemanticTag tag{resource, {}};
  std::optional<ResolverFailure> failure;
  try {
    tag.labels = resolver(resource);
  } catch (const std::exception& e) {
    failure = ResolverFailure{resource, e.what()};
  }
  std::sort(tag.labels.begin(), tag.labels.end());
  tag.labels.erase(std::unique(tag.labels.begin(), tag.labels.end()), tag.labels.end());
  auto pos = std::lower_bound(a.semanticTags.begin(), a.semanticTags.end(), resource,
                              [](const SemanticTag& t, const Iri& r) { return t.resource < r; });
  a.semanticTags.insert(pos, std::move(tag));
  return {std::move(a), std::move(failure)};
}

}  // namespace oac
