#include <gtest/gtest.h>

#include <algorithm>

#include "oac/model.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace oac;
using oac::testing::Generator;
using oac::testing::readFixture;

namespace {

const Iri kAnn{"urn:x"};

Annotation minimal() {
  return Annotation{kAnn, Body{InlineBody{Iri("urn:uuid:1"), "hi"}, {}},
                    {Target{DirectTarget{Iri("http://cnn.com/")}, {}}}, {}, {}, {}, {}, {}};
}

Annotation fromFixture(const std::string& name) {
  rdf::Graph g = rdf::parse(readFixture(name), rdf::Format::Turtle);
  auto uris = findAnnotations(g);
  EXPECT_EQ(uris.size(), 1u);
  return annotationFromGraph(g, uris.front());
}

std::vector<ViolationCode> codes(const std::vector<Violation>& vs) {
  std::vector<ViolationCode> out;
  for (const auto& v : vs) out.push_back(v.code);
  return out;
}

rdf::Triple t(const rdf::Term& s, const char* p, const rdf::Term& o) { return rdf::Triple(s, Iri(p), o); }

const char* const kOac = "http://www.openannotation.org/ns/";
std::string oacTerm(const char* local) { return std::string(kOac) + local; }

}  // namespace

TEST(ToGraph, InlineBodyEmitsChars) {
  rdf::Graph g = annotationToGraph(minimal());
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kCntChars), rdf::Literal("hi"))));
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kCntCharacterEncoding), rdf::Literal("utf-8"))));
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kRdfType), Iri(term::kCntContentAsText))));
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kRdfType), Iri(oacTerm("Body")))));
  EXPECT_TRUE(g.contains(rdf::Triple(kAnn, Iri(term::kRdfType), Iri(oacTerm("Annotation")))));
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("http://cnn.com/"), Iri(term::kRdfType), Iri(oacTerm("Target")))));
}

TEST(ToGraph, WhenOnAnnotation) {
  Annotation a = minimal();
  a.when = DateTime::parseIso("2010-04-01T00:00:00Z");
  rdf::Graph g = annotationToGraph(a);
  EXPECT_TRUE(g.contains(rdf::Triple(kAnn, Iri(oacTerm("when")), rdf::Literal::dateTime(*a.when))));
}

TEST(ToGraph, SvgConstraintTarget) {
  Annotation a = minimal();
  Iri ct("urn:uuid:ct"), c("urn:uuid:c");
  a.targets = {Target{ConstrainedTarget{ct, Iri("http://example.org/i.jpg"),
                                        SvgConstraint{c, "<rect x=\"0\" y=\"0\" width=\"5\" height=\"5\"/>"}},
                      {}}};
  rdf::Graph g = annotationToGraph(a);
  EXPECT_TRUE(g.contains(rdf::Triple(ct, Iri(term::kRdfType), Iri(oacTerm("ConstraintTarget")))));
  EXPECT_TRUE(g.contains(rdf::Triple(ct, Iri(oacTerm("constrainedBy")), c)));
  EXPECT_TRUE(g.contains(rdf::Triple(ct, Iri(oacTerm("constrains")), Iri("http://example.org/i.jpg"))));
  EXPECT_TRUE(g.contains(rdf::Triple(c, Iri(term::kRdfType), Iri(oacTerm("SvgConstraint")))));
}

TEST(ToGraph, VocabularyTableRepointsPredicates) {
  Vocabulary v = Vocabulary::standard();
  v.hasBody = Iri("http://example.org/alt#body");
  rdf::Graph g = annotationToGraph(minimal(), v);
  EXPECT_TRUE(g.contains(rdf::Triple(kAnn, v.hasBody, Iri("urn:uuid:1"))));
  EXPECT_EQ(annotationFromGraph(g, kAnn, v), minimal());
}

TEST(RoundTrip, GeneratedAnnotations) {
  Generator gen(11);
  for (int i = 0; i < 400; ++i) {
    Annotation a = gen.annotation();
    ASSERT_TRUE(validate(a).empty()) << toString(validate(a).front().code);
    rdf::Graph g = annotationToGraph(a);
    ASSERT_EQ(annotationFromGraph(g, a.uri), a);
    // Through text as well, in both formats.
    for (auto f : {rdf::Format::NTriples, rdf::Format::Turtle}) {
      rdf::Graph back = rdf::parse(rdf::serialize(g, f), f);
      ASSERT_EQ(back, g);
    }
  }
}

TEST(RoundTrip, CardinalityOfSerializedGraph) {
  Generator gen(12);
  Vocabulary v = Vocabulary::standard();
  for (int i = 0; i < 200; ++i) {
    Annotation a = gen.annotation();
    rdf::Graph g = rdf::parse(rdf::serialize(annotationToGraph(a), rdf::Format::NTriples), rdf::Format::NTriples);
    EXPECT_EQ(g.objects(a.uri, v.hasBody).size(), 1u);
    EXPECT_GE(g.objects(a.uri, v.hasTarget).size(), 1u);
    EXPECT_EQ(g.objects(a.uri, v.hasTarget).size(), a.targets.size());
  }
}

TEST(RoundTrip, ThreadTargetIsAnotherAnnotation) {
  Annotation parent = minimal();
  Annotation reply = minimal();
  reply.uri = Iri("http://example.org/annotations/reply");
  reply.body = Body{ExternalBody{Iri("http://example.org/reply-body")}, {}};
  reply.targets = {Target{DirectTarget{parent.uri}, {}}};
  rdf::Graph g = annotationToGraph(parent);
  g.insert(annotationToGraph(reply));
  EXPECT_EQ(annotationFromGraph(g, reply.uri), reply);
  EXPECT_EQ(annotationFromGraph(g, parent.uri), parent);
  EXPECT_EQ(findAnnotations(g).size(), 2u);
}

TEST(RoundTrip, ExtrasArePreserved) {
  std::string ttl = readFixture("cnn_timeless.ttl") +
                    "<http://example.org/annotations/cnn-front-page> <http://example.org/ns/motivation> \"x\" .\n";
  rdf::Graph g = rdf::parse(ttl, rdf::Format::Turtle);
  Annotation a = annotationFromGraph(g, Iri("http://example.org/annotations/cnn-front-page"));
  EXPECT_EQ(a.extras.size(), 1u);
  rdf::Graph out = annotationToGraph(a);
  for (const auto& tr : g) EXPECT_TRUE(out.contains(tr)) << rdf::toNTriples(tr.subject);
}

TEST(FromGraph, FixturesRead) {
  Annotation cnn = fromFixture("cnn_timeless.ttl");
  ASSERT_NE(cnn.body.inlineContent(), nullptr);
  EXPECT_EQ(cnn.body.inlineContent()->chars, "This is the front page of CNN");
  EXPECT_EQ(cnn.creator, "Alice");
  Annotation map = fromFixture("map_region.ttl");
  ASSERT_EQ(map.targets.size(), 1u);
  ASSERT_NE(map.targets[0].constrained(), nullptr);
  EXPECT_EQ(map.targets[0].resource(), Iri("http://example.org/maps/austria-1790.jpg"));
  ASSERT_EQ(map.semanticTags.size(), 1u);
  EXPECT_TRUE(validate(map).empty());
}

TEST(FromGraph, CardinalityErrorsNameTheNode) {
  auto expectError = [](const std::string& fixture, const char* uri, ViolationCode code) {
    rdf::Graph g = rdf::parse(readFixture(fixture), rdf::Format::Turtle);
    try {
      annotationFromGraph(g, Iri(uri));
      ADD_FAILURE() << fixture;
    } catch (const ModelError& e) {
      EXPECT_EQ(e.code(), code) << fixture;
      EXPECT_EQ(e.node(), uri);
    }
    EXPECT_EQ(codes(validateGraph(g, Iri(uri))), std::vector<ViolationCode>{code});
  };
  expectError("two_bodies.ttl", "http://example.org/annotations/two-bodies", ViolationCode::MultipleBodies);
  expectError("zero_bodies.ttl", "http://example.org/annotations/no-body", ViolationCode::MissingBody);
  expectError("zero_targets.ttl", "http://example.org/annotations/no-target", ViolationCode::NoTargets);
}

TEST(FromGraph, MalformedConstraint) {
  Iri ct("urn:uuid:ct");
  rdf::Graph g{t(kAnn, term::kRdfType, Iri(oacTerm("Annotation"))),
               t(kAnn, (std::string(kOac) + "hasBody").c_str(), Iri("http://b/")),
               t(kAnn, (std::string(kOac) + "hasTarget").c_str(), ct),
               t(ct, term::kRdfType, Iri(oacTerm("ConstraintTarget"))),
               t(ct, (std::string(kOac) + "constrains").c_str(), Iri("http://i/"))};
  try {
    annotationFromGraph(g, kAnn);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ViolationCode::MalformedConstraint);
    EXPECT_EQ(e.node(), ct.str());
  }
}

TEST(FromGraph, NotAnAnnotation) {
  rdf::Graph g{t(kAnn, term::kRdfType, Iri("http://example.org/Thing"))};
  try {
    annotationFromGraph(g, kAnn);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ViolationCode::NotAnAnnotation);
  }
}

TEST(Validate, MinimalIsClean) { EXPECT_TRUE(validate(minimal()).empty()); }

TEST(Validate, EmptyInlineBody) {
  Annotation a = minimal();
  std::get<InlineBody>(a.body.content).chars.clear();
  EXPECT_EQ(codes(validate(a)), std::vector<ViolationCode>{ViolationCode::EmptyInlineBody});
}

TEST(Validate, AmbiguousTemporalClass) {
  Annotation a = minimal();
  a.when = DateTime::parseIso("2010-04-01T00:00:00Z");
  a.body.timeConstraint = TimeConstraint{Iri("urn:uuid:tc"), DateTime::parseIso("2010-04-02T00:00:00Z")};
  EXPECT_EQ(codes(validate(a)), std::vector<ViolationCode>{ViolationCode::AmbiguousTemporalClass});
  EXPECT_THROW(classifyTemporal(a), ModelError);
}

TEST(Validate, AmbiguityCrossCheckOverAllPlacements) {
  // Enumerate where a datetime may appear; only the "when plus a constraint" mixtures are ambiguous.
  DateTime d = DateTime::parseIso("2010-04-01T00:00:00Z");
  for (int mask = 0; mask < 8; ++mask) {
    Annotation a = minimal();
    bool when = mask & 1, bodyTc = mask & 2, targetTc = mask & 4;
    if (when) a.when = d;
    if (bodyTc) a.body.timeConstraint = TimeConstraint{Iri("urn:uuid:tb"), d};
    if (targetTc) a.targets[0].timeConstraint = TimeConstraint{Iri("urn:uuid:tt"), d};
    bool ambiguous = when && (bodyTc || targetTc);
    auto vs = codes(validate(a));
    EXPECT_EQ(std::count(vs.begin(), vs.end(), ViolationCode::AmbiguousTemporalClass), ambiguous ? 1 : 0);
    if (ambiguous) continue;
    auto cls = classifyTemporal(a);
    int expected = when ? 1 : (bodyTc || targetTc) ? 2 : 0;
    EXPECT_EQ(int(cls.index()), expected);
  }
}

TEST(Validate, OtherViolations) {
  Annotation a = minimal();
  a.targets.clear();
  EXPECT_EQ(codes(validate(a)), std::vector<ViolationCode>{ViolationCode::NoTargets});

  a = minimal();
  std::get<InlineBody>(a.body.content).encoding.clear();
  EXPECT_EQ(codes(validate(a)), std::vector<ViolationCode>{ViolationCode::MissingEncoding});

  a = minimal();
  a.targets = {Target{ConstrainedTarget{Iri("urn:uuid:ct"), Iri("http://i/"),
                                        SvgConstraint{Iri("urn:uuid:c"), "<path d=\"M 0 0 C 1 1 2 2 3 3\"/>"}},
                      {}}};
  EXPECT_EQ(codes(validate(a)), std::vector<ViolationCode>{ViolationCode::InvalidSvgConstraint});

  a = minimal();
  a.targets = {Target{ConstrainedTarget{Iri("urn:uuid:ct"), Iri("http://i/"),
                                        TimeConstraint{Iri("urn:uuid:c"), DateTime::fromUnixSeconds(0)}},
                      {}}};
  EXPECT_EQ(codes(validate(a)), std::vector<ViolationCode>{ViolationCode::MisplacedTimeConstraint});
}

TEST(Classify, ScenarioFixtures) {
  EXPECT_EQ(temporalClassName(classifyTemporal(fromFixture("cnn_timeless.ttl"))), "Timeless");
  auto uniform = classifyTemporal(fromFixture("cartoon_uniform.ttl"));
  EXPECT_EQ(temporalClassName(uniform), "Uniform");
  EXPECT_EQ(std::get<Uniform>(uniform).when, DateTime::parseIso("2010-04-01T12:00:00Z"));
  auto varied = classifyTemporal(fromFixture("cartoon_varied.ttl"));
  EXPECT_EQ(temporalClassName(varied), "Varied");
  EXPECT_EQ(std::get<Varied>(varied).bodyWhen, DateTime::parseIso("2010-04-03T18:00:00Z"));
  EXPECT_EQ(std::get<Varied>(varied).targetWhens,
            std::vector<std::optional<DateTime>>{DateTime::parseIso("2010-04-01T08:00:00Z")});
}

TEST(Classify, TotalOverGeneratedAnnotations) {
  Generator gen(13);
  for (auto mode : {Generator::Temporal::Timeless, Generator::Temporal::Uniform, Generator::Temporal::Varied}) {
    for (int i = 0; i < 50; ++i) {
      auto cls = classifyTemporal(gen.annotation(mode));
      EXPECT_EQ(cls.index(), std::size_t(mode));
    }
  }
}

TEST(Equivalence, RegisterAndConflicts) {
  EquivalenceMap m = registerEquivalence({}, Iri("urn:uuid:1"), Iri("http://srv/bodies/1"));
  EXPECT_EQ(m.lookup(Iri("urn:uuid:1")), Iri("http://srv/bodies/1"));
  EXPECT_EQ(registerEquivalence(m, Iri("urn:uuid:1"), Iri("http://srv/bodies/1")), m);
  try {
    registerEquivalence(m, Iri("urn:uuid:1"), Iri("http://srv/bodies/2"));
    FAIL();
  } catch (const EquivalenceError& e) {
    EXPECT_EQ(e.kind(), EquivalenceError::Kind::ConflictingBinding);
  }
  try {
    registerEquivalence(m, Iri("http://a/"), Iri("http://b/"));
    FAIL();
  } catch (const EquivalenceError& e) {
    EXPECT_EQ(e.kind(), EquivalenceError::Kind::NotAUrn);
  }
  try {
    registerEquivalence(m, Iri("urn:uuid:2"), Iri("urn:uuid:3"));
    FAIL();
  } catch (const EquivalenceError& e) {
    EXPECT_EQ(e.kind(), EquivalenceError::Kind::NotDereferenceable);
  }
}

TEST(Equivalence, GraphCarriesSameAs) {
  EquivalenceMap m = registerEquivalence({}, Iri("urn:uuid:1"), Iri("http://srv/bodies/1"));
  rdf::Graph g = annotationToGraph(minimal(), m);
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kOwlSameAs), Iri("http://srv/bodies/1"))));
  EXPECT_EQ(equivalencesFromGraph(g), m);
}

TEST(Equivalence, ResolveReferences) {
  Annotation a = minimal();
  EXPECT_EQ(resolveReferences(a, {}), a);

  EquivalenceMap m = registerEquivalence({}, Iri("urn:uuid:1"), Iri("http://srv/b/1"));
  Annotation r = resolveReferences(a, m);
  EXPECT_EQ(r.body.id(), Iri("http://srv/b/1"));
  EXPECT_EQ(r.body.inlineContent()->chars, "hi");
  EXPECT_TRUE(validate(r).empty());

  a.targets = {Target{DirectTarget{Iri("urn:uuid:unbound")}, {}}};
  EXPECT_EQ(resolveReferences(a, m).targets, a.targets);
}

TEST(Equivalence, ResolveIsIdempotent) {
  Generator gen(14);
  for (int i = 0; i < 100; ++i) {
    Annotation a = gen.annotation();
    EquivalenceMap m;
    // Bind every URN node id in the annotation.
    rdf::Graph g = annotationToGraph(a);
    int n = 0;
    for (const auto& tr : g) {
      const Iri* s = rdf::asIri(tr.subject);
      if (s && s->isUrn() && !m.lookup(*s) && gen.coin()) {
        m = registerEquivalence(m, *s, Iri("http://srv/n/" + std::to_string(n++)));
      }
    }
    Annotation once = resolveReferences(a, m);
    EXPECT_EQ(resolveReferences(once, m), once);
    EXPECT_TRUE(validate(once).empty());
  }
}

TEST(Equivalence, RewriteGraphLeavesSameAs) {
  EquivalenceMap m = registerEquivalence({}, Iri("urn:uuid:1"), Iri("http://srv/b/1"));
  rdf::Graph g = annotationToGraph(minimal(), m);
  rdf::Graph rewritten = rewriteGraph(g, m);
  EXPECT_TRUE(rewritten.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kOwlSameAs), Iri("http://srv/b/1"))));
  EXPECT_TRUE(rewritten.contains(rdf::Triple(Iri("http://srv/b/1"), Iri(term::kCntChars), rdf::Literal("hi"))));
  EXPECT_EQ(annotationFromGraph(rewritten, kAnn), resolveReferences(minimal(), m));
}

TEST(Tags, FixtureResolverCachesLabels) {
  auto resolver = graphTagResolver(rdf::parse(readFixture("tag_labels.ttl"), rdf::Format::Turtle));
  Iri geo("http://sws.geonames.org/2761369/");
  auto r = attachSemanticTag(minimal(), geo, resolver);
  EXPECT_FALSE(r.failure.has_value());
  ASSERT_EQ(r.annotation.semanticTags.size(), 1u);
  EXPECT_EQ(r.annotation.semanticTags[0].labels,
            (std::vector<TagLabel>{{"Vienna", std::string("en")}, {"Wien", std::string("de")}}));
  rdf::Graph g = annotationToGraph(r.annotation);
  EXPECT_TRUE(g.contains(rdf::Triple(Iri("urn:uuid:1"), Iri(term::kDctermsReferences), geo)));
  EXPECT_EQ(annotationFromGraph(g, kAnn), r.annotation);
}

TEST(Tags, NoopResolverAndDuplicates) {
  Iri geo("http://sws.geonames.org/2761369/");
  auto r = attachSemanticTag(minimal(), geo, noopTagResolver());
  ASSERT_EQ(r.annotation.semanticTags.size(), 1u);
  EXPECT_TRUE(r.annotation.semanticTags[0].labels.empty());
  auto again = attachSemanticTag(r.annotation, geo, [](const Iri&) -> std::vector<TagLabel> {
    ADD_FAILURE() << "resolver must not run for an existing tag";
    return {};
  });
  EXPECT_EQ(again.annotation, r.annotation);
}

TEST(Tags, ResolverFailureStillAttaches) {
  Iri geo("http://sws.geonames.org/2761369/");
  auto r = attachSemanticTag(minimal(), geo, [](const Iri&) -> std::vector<TagLabel> {
    throw std::runtime_error("connection refused");
  });
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->resource, geo);
  ASSERT_EQ(r.annotation.semanticTags.size(), 1u);
  EXPECT_TRUE(r.annotation.semanticTags[0].labels.empty());
}
