#include <gtest/gtest.h>

#include <random>

#include "oac/rdf.hpp"
#include "oac/vocabulary.hpp"

using namespace oac;
using namespace oac::rdf;

namespace {

Graph randomGraph(std::mt19937_64& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const std::vector<std::string> iris = {"urn:a", "urn:uuid:1", "http://example.org/x",
                                         "http://www.openannotation.org/ns/Annotation",
                                         "http://example.org/caf\xc3\xa9", "https://h/p?q=1#f"};
  const std::vector<std::string> texts = {"", "x", "line\nbreak", "tab\t\"quoted\"", "back\\slash",
                                          "\xe4\xb8\xad", "\xf0\x9f\x97\xba", "\x01"};
  auto node = [&]() -> Term {
    if (pick(4) == 0) return BlankNode("n" + std::to_string(pick(4)));
    return Iri(iris[pick(int(iris.size()))]);
  };
  Graph g;
  int n = pick(12);
  for (int i = 0; i < n; ++i) {
    Term object = node();
    switch (pick(4)) {
      case 0: object = Literal(texts[pick(int(texts.size()))]); break;
      case 1: object = Literal::withLanguage(texts[pick(int(texts.size()))], pick(2) ? "en" : "de-AT"); break;
      case 2: object = Literal(texts[pick(int(texts.size()))], Iri(term::kXsdDateTime)); break;
      default: break;
    }
    g.insert(Triple(node(), Iri(iris[pick(int(iris.size()))]), object));
  }
  return g;
}

}  // namespace

TEST(Iri, SchemeClassification) {
  EXPECT_TRUE(Iri("http://cnn.com/").isDereferenceable());
  EXPECT_TRUE(Iri("HTTPS://example.org").isDereferenceable());
  EXPECT_FALSE(Iri("urn:uuid:1").isDereferenceable());
  EXPECT_TRUE(Iri("urn:uuid:1").isUrn());
  EXPECT_EQ(Iri("urn:uuid:1").scheme(), "urn");
  EXPECT_THROW(Iri("relative/path"), InvalidTerm);
  EXPECT_THROW(Iri("http://a b"), InvalidTerm);
  EXPECT_THROW(Iri(":nothing"), InvalidTerm);
}

TEST(Terms, LiteralAndBlankNodeInvariants) {
  EXPECT_THROW(Literal::withLanguage("x", "not a tag"), InvalidTerm);
  EXPECT_THROW(BlankNode("b-1"), InvalidTerm);
  EXPECT_THROW(BlankNode(""), InvalidTerm);
  EXPECT_THROW(Triple(Literal("x"), Iri("urn:p"), Literal("y")), InvalidTerm);
  auto dt = Literal::dateTime(DateTime::parseIso("2010-04-01T00:00:00Z"));
  EXPECT_EQ(dt.lexical(), "2010-04-01T00:00:00Z");
  EXPECT_EQ(dt.asDateTime(), DateTime::parseIso("2010-04-01T00:00:00Z"));
}

TEST(DateTimeTest, IsoAndHttpForms) {
  auto d = DateTime::parseHttpDate("Thu, 01 Apr 2010 00:00:00 GMT");
  EXPECT_EQ(d.toIso(), "2010-04-01T00:00:00Z");
  EXPECT_EQ(d.toHttpDate(), "Thu, 01 Apr 2010 00:00:00 GMT");
  EXPECT_EQ(DateTime::parseIso("1970-01-01T00:00:01Z").unixSeconds(), 1);
  EXPECT_THROW(DateTime::parseHttpDate("Fri, 01 Apr 2010 00:00:00 GMT"), DateTimeError);
  EXPECT_THROW(DateTime::parseIso("2010-04-01T00:00:00"), DateTimeError);
  EXPECT_THROW(DateTime::parseIso("2010-02-30T00:00:00Z"), DateTimeError);
  EXPECT_THROW(DateTime::parseIso("2010-04-01T00:00:00.5Z"), DateTimeError);
}

TEST(Parse, SingleStatement) {
  Graph g = parse("<urn:a> <urn:p> \"x\" .", Format::NTriples);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.begin()->object, Term(Literal("x")));
}

TEST(Parse, OacPrefixExpands) {
  Graph g = parse("@prefix oac: <http://www.openannotation.org/ns/> . <urn:a> a oac:Annotation .",
                  Format::Turtle);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.begin()->predicate, Iri(term::kRdfType));
  EXPECT_EQ(g.begin()->object, Term(Iri("http://www.openannotation.org/ns/Annotation")));
}

TEST(Parse, DuplicateStatementsCollapse) {
  Graph g = parse("<urn:a> <urn:p> \"x\" .\n<urn:a> <urn:p> \"x\" .\n", Format::NTriples);
  EXPECT_EQ(g.size(), 1u);
}

TEST(Parse, TurtleAbbreviations) {
  Graph g = parse(R"(@prefix ex: <http://example.org/> .
PREFIX dc: <http://purl.org/dc/terms/>
ex:a a ex:Thing, ex:Other ;
     dc:title "T"@en ;
     ex:n 42 ; ex:d 1.5 ; ex:b true ;
     ex:long """multi
line""" .
_:x ex:p ex:a .
)", Format::Turtle);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_TRUE(g.contains(Triple(Iri("http://example.org/a"), Iri("http://example.org/n"),
                                Literal("42", Iri("http://www.w3.org/2001/XMLSchema#integer")))));
  EXPECT_TRUE(g.contains(Triple(Iri("http://example.org/a"), Iri("http://example.org/long"),
                                Literal("multi\nline"))));
  EXPECT_TRUE(g.contains(Triple(BlankNode("x"), Iri("http://example.org/p"), Iri("http://example.org/a"))));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse("<urn:a> <urn:p> \"x\" .\n<urn:a> <urn:p> .", Format::NTriples);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
  try {
    parse("<urn:a> a nope:Thing .", Format::Turtle);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::UnknownPrefix);
  }
  try {
    parse("<relative> <urn:p> <urn:o> .", Format::NTriples);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::RelativeIri);
  }
  EXPECT_THROW(parse("<urn:a> a <urn:b> .", Format::NTriples), ParseError);
  EXPECT_THROW(parse("<urn:a> <urn:p> [ <urn:q> 1 ] .", Format::Turtle), ParseError);
}

TEST(Parse, UnicodeEscapesDecode) {
  Graph g = parse(R"(<urn:a> <urn:p> "caf\u00E9 \U0001F5FA" .)", Format::NTriples);
  EXPECT_EQ(std::get<Literal>(g.begin()->object).lexical(), "caf\xc3\xa9 \xf0\x9f\x97\xba");
}

TEST(Serialize, EmptyAndSingle) {
  EXPECT_EQ(serialize(Graph{}, Format::NTriples), "");
  std::string one = serialize(Graph{Triple(Iri("urn:a"), Iri("urn:p"), Literal("x"))}, Format::NTriples);
  EXPECT_EQ(one, "<urn:a> <urn:p> \"x\" .\n");
}

TEST(Serialize, NTriplesIsAsciiAndSorted) {
  Graph g{Triple(Iri("urn:b"), Iri("urn:p"), Literal("\xc3\xa9")),
          Triple(Iri("urn:a"), Iri("urn:p"), Literal::withLanguage("x", "en"))};
  std::string out = serialize(g, Format::NTriples);
  EXPECT_EQ(out, "<urn:a> <urn:p> \"x\"@en .\n<urn:b> <urn:p> \"\\u00E9\" .\n");
}

TEST(Serialize, BlankNodesGetCanonicalLabels) {
  Graph g1{Triple(BlankNode("zz"), Iri("urn:p"), Literal("1")),
           Triple(Iri("urn:s"), Iri("urn:q"), BlankNode("zz"))};
  Graph g2{Triple(BlankNode("aa"), Iri("urn:p"), Literal("1")),
           Triple(Iri("urn:s"), Iri("urn:q"), BlankNode("aa"))};
  EXPECT_EQ(serialize(g1, Format::NTriples), serialize(g2, Format::NTriples));
  EXPECT_NE(serialize(g1, Format::NTriples).find("_:b0"), std::string::npos);
}

TEST(Serialize, TurtleUsesPrefixesAndGrouping) {
  Graph g{Triple(Iri("http://example.org/a"), Iri(term::kRdfType),
                 Iri("http://www.openannotation.org/ns/Annotation")),
          Triple(Iri("http://example.org/a"), Iri("http://www.openannotation.org/ns/hasTarget"),
                 Iri("http://cnn.com/"))};
  std::string ttl = serialize(g, Format::Turtle);
  EXPECT_NE(ttl.find("@prefix oac: <http://www.openannotation.org/ns/> ."), std::string::npos);
  EXPECT_NE(ttl.find("<http://example.org/a> a oac:Annotation ;"), std::string::npos);
  EXPECT_EQ(parse(ttl, Format::Turtle), g);
}

TEST(Serialize, RoundTripPropertyBothFormats) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Graph g = randomGraph(rng);
    for (auto f : {Format::NTriples, Format::Turtle}) {
      std::string text = serialize(g, f);
      Graph back = parse(text, f);
      ASSERT_TRUE(isomorphic(back, g)) << text;
    }
    // Canonical output is independent of blank-node spelling and insertion order.
    std::string nt = serialize(g, Format::NTriples);
    EXPECT_EQ(serialize(parse(nt, Format::NTriples), Format::NTriples), nt);
  }
}

TEST(Isomorphism, DetectsStructureNotLabels) {
  Graph a{Triple(BlankNode("x"), Iri("urn:p"), BlankNode("y"))};
  Graph b{Triple(BlankNode("q"), Iri("urn:p"), BlankNode("r"))};
  Graph c{Triple(BlankNode("q"), Iri("urn:p"), BlankNode("q"))};
  EXPECT_TRUE(isomorphic(a, b));
  EXPECT_FALSE(isomorphic(a, c));
}

TEST(Namespaces, CompactExpandIdentity) {
  const auto& ns = NamespaceTable::standard();
  EXPECT_EQ(*ns.lookup("oac"), "http://www.openannotation.org/ns/");
  for (const char* name : {"oac:Annotation", "oac:hasBody", "cnt:chars", "cnt:characterEncoding",
                           "dcterms:creator", "dcterms:created", "owl:sameAs"}) {
    Iri iri = ns.expand(name);
    EXPECT_EQ(ns.compact(iri), std::optional<std::string>(name));
    EXPECT_EQ(ns.expand(*ns.compact(iri)), iri);
  }
  EXPECT_FALSE(ns.compact(Iri("http://example.org/x")).has_value());
}

TEST(Formats, MediaTypes) {
  EXPECT_EQ(formatFromMediaType("text/turtle; charset=utf-8"), Format::Turtle);
  EXPECT_EQ(formatFromMediaType("application/n-triples"), Format::NTriples);
  EXPECT_FALSE(formatFromMediaType("application/json").has_value());
  EXPECT_EQ(formatFromPath("x.nt"), Format::NTriples);
}
