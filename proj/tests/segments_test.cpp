#include <gtest/gtest.h>

#include "oac/segments.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace oac;
using oac::testing::Generator;

TEST(MediaFragments, SpatialTemporalAndPtr) {
  auto f = parseMediaFragment("xywh=10,20,30,40").fragment;
  EXPECT_EQ(f.spatial, (SpatialDimension{SpatialUnit::Pixel, 10, 20, 30, 40}));
  f = parseMediaFragment("t=10,20").fragment;
  EXPECT_EQ(f.temporal, (TemporalDimension{10, 20}));
  f = parseMediaFragment("ptr=http%3A%2F%2Fsrv%2Fconstraints%2F7").fragment;
  EXPECT_EQ(f.ptr, rdf::Iri("http://srv/constraints/7"));
}

TEST(MediaFragments, Variants) {
  auto r = parseMediaFragment("#t=npt:5&xywh=percent:1,2,3,4&track=audio&id=chapter%201&foo=bar");
  EXPECT_EQ(r.fragment.temporal, (TemporalDimension{5, std::nullopt}));
  EXPECT_EQ(r.fragment.spatial, (SpatialDimension{SpatialUnit::Percent, 1, 2, 3, 4}));
  EXPECT_EQ(r.fragment.track, "audio");
  EXPECT_EQ(r.fragment.id, "chapter 1");
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("foo"), std::string::npos);
  EXPECT_EQ(parseMediaFragment("xywh=pixel:1,2,3,4").fragment.spatial->unit, SpatialUnit::Pixel);
}

TEST(MediaFragments, Errors) {
  auto expectKind = [](const char* s, FragmentError::Kind kind, const char* key) {
    try {
      parseMediaFragment(s);
      ADD_FAILURE() << s;
    } catch (const FragmentError& e) {
      EXPECT_EQ(e.kind(), kind) << s;
      EXPECT_EQ(e.key(), key) << s;
    }
  };
  expectKind("t=20,10", FragmentError::Kind::MalformedDimension, "t");
  expectKind("xywh=percent:0,0,101,5", FragmentError::Kind::MalformedDimension, "xywh");
  expectKind("xywh=1,2,3", FragmentError::Kind::MalformedDimension, "xywh");
  expectKind("xywh=-1,2,3,4", FragmentError::Kind::MalformedDimension, "xywh");
  expectKind("ptr=relative", FragmentError::Kind::MalformedDimension, "ptr");
  expectKind("t=1&t=2", FragmentError::Kind::DuplicateKey, "t");
}

TEST(MediaFragments, Serialize) {
  MediaFragment f;
  EXPECT_EQ(serializeMediaFragment(f), "");
  f.spatial = SpatialDimension{SpatialUnit::Pixel, 10, 20, 30, 40};
  EXPECT_EQ(serializeMediaFragment(f), "xywh=10,20,30,40");
  f.ptr = rdf::Iri("http://srv/constraints/7");
  f.temporal = TemporalDimension{1.5, 3};
  EXPECT_EQ(serializeMediaFragment(f), "t=1.5,3&xywh=10,20,30,40&ptr=http%3A%2F%2Fsrv%2Fconstraints%2F7");
}

TEST(MediaFragments, RoundTripProperty) {
  Generator gen(21);
  for (int i = 0; i < 2000; ++i) {
    MediaFragment f;
    if (gen.coin()) {
      double start = gen.integer(0, 1000) / 4.0;
      f.temporal = TemporalDimension{start, gen.coin() ? std::optional<double>(start + gen.integer(1, 100) / 8.0)
                                                         : std::nullopt};
    }
    if (gen.coin()) {
      bool pct = gen.coin();
      double hi = pct ? 100 : 5000;
      f.spatial = SpatialDimension{pct ? SpatialUnit::Percent : SpatialUnit::Pixel, std::round(gen.real(0, hi)),
                                   gen.real(0, hi), std::round(gen.real(0, hi)), gen.real(0, hi)};
    }
    if (gen.coin()) f.track = gen.text();
    if (gen.coin()) f.id = gen.text();
    if (gen.coin()) f.ptr = gen.http("constraints");
    std::string s = serializeMediaFragment(f);
    auto back = parseMediaFragment(s);
    ASSERT_EQ(back.fragment, f) << s;
    EXPECT_TRUE(back.warnings.empty());
  }
}

TEST(Svg, ParseExamples) {
  EXPECT_EQ(std::get<Rect>(parseSvgConstraint("<rect x=\"0\" y=\"0\" width=\"5\" height=\"5\"/>")), (Rect{0, 0, 5, 5}));
  EXPECT_EQ(std::get<Polygon>(parseSvgConstraint("<polygon points=\"0,0 10,0 0,10\"/>")).points.size(), 3u);
  try {
    parseSvgConstraint("<path d=\"M 0 0 C 1 1 2 2 3 3\"/>");
    FAIL();
  } catch (const SvgError& e) {
    EXPECT_EQ(e.kind(), SvgError::Kind::UnsupportedPathCommand);
  }
}

TEST(Svg, AttributeOrderAndWhitespace) {
  auto a = parseSvgConstraint("<rect height='5' width=\"5\"\n   y=\"2\" x=\"1\" ></rect>");
  EXPECT_EQ(std::get<Rect>(a), (Rect{1, 2, 5, 5}));
  auto c = parseSvgConstraint("<svg:circle xmlns:svg=\"http://www.w3.org/2000/svg\" cx=\"5\" cy=\"5\" r=\"2\"/>");
  EXPECT_EQ(std::get<Circle>(c), (Circle{5, 5, 2}));
  auto p = parseSvgConstraint("<path d=\"M0,0 L10,0 10,10Z M 20 20 L 30 20 L 30 30\"/>");
  const auto& path = std::get<Path>(p);
  ASSERT_EQ(path.subpaths.size(), 2u);
  EXPECT_TRUE(path.subpaths[0].closed);
  EXPECT_EQ(path.subpaths[0].points.size(), 3u);
  EXPECT_FALSE(path.subpaths[1].closed);
}

TEST(Svg, Errors) {
  auto kindOf = [](const char* s) {
    try {
      parseSvgConstraint(s);
    } catch (const SvgError& e) {
      return int(e.kind());
    }
    return -1;
  };
  EXPECT_EQ(kindOf("<text x=\"0\">hi</text>"), int(SvgError::Kind::UnsupportedElement));
  EXPECT_EQ(kindOf("<rect x=\"0\" y=\"0\" width=\"-5\" height=\"5\"/>"), int(SvgError::Kind::MalformedAttribute));
  EXPECT_EQ(kindOf("<rect x=\"zero\" width=\"5\" height=\"5\"/>"), int(SvgError::Kind::MalformedAttribute));
  EXPECT_EQ(kindOf("<polygon points=\"0,0 1,1\"/>"), int(SvgError::Kind::MalformedAttribute));
  EXPECT_EQ(kindOf("<circle r=\"0\"/>"), int(SvgError::Kind::MalformedAttribute));
  EXPECT_EQ(kindOf("<path d=\"m 0 0 l 1 1\"/>"), int(SvgError::Kind::UnsupportedPathCommand));
  EXPECT_EQ(kindOf("<rect width=\"5\" height=\"5\" transform=\"rotate(4)\"/>"), int(SvgError::Kind::MalformedAttribute));
  EXPECT_EQ(kindOf("not svg"), int(SvgError::Kind::MalformedAttribute));
}

TEST(Svg, RoundTripProperty) {
  Generator gen(22);
  for (int i = 0; i < 2000; ++i) {
    SvgShape s = gen.shape();
    std::string text = toSvg(s);
    ASSERT_EQ(parseSvgConstraint(text), s) << text;
  }
}

TEST(Geometry, BoundingBoxExamples) {
  EXPECT_EQ(boundingBox(Circle{5, 5, 2}), (Rect{3, 3, 4, 4}));
  EXPECT_EQ(boundingBox(Polygon{{{0, 0}, {10, 0}, {0, 10}}}), (Rect{0, 0, 10, 10}));
  EXPECT_EQ(boundingBox(Ellipse{0, 0, 2, 1}), (Rect{-2, -1, 4, 2}));
}

TEST(Geometry, BoundingBoxMatchesVertexScan) {
  Generator gen(23);
  for (int i = 0; i < 2000; ++i) {
    auto pts = gen.points(gen.integer(3, 12));
    EXPECT_EQ(boundingBox(Polygon{pts}), oac::testing::vertexBox(pts));
    Path path{{{pts, gen.coin()}}};
    EXPECT_EQ(boundingBox(path), oac::testing::vertexBox(pts));
  }
}

TEST(Geometry, ContainsExamples) {
  EXPECT_TRUE(containsPoint(Rect{0, 0, 10, 10}, {5, 5}));
  EXPECT_TRUE(containsPoint(Rect{0, 0, 10, 10}, {10, 3}));
  EXPECT_FALSE(containsPoint(Circle{0, 0, 1}, {2, 0}));
  EXPECT_TRUE(containsPoint(Circle{0, 0, 1}, {1, 0}));
  EXPECT_TRUE(containsPoint(Ellipse{0, 0, 2, 1}, {1.9, 0}));
  EXPECT_FALSE(containsPoint(Ellipse{0, 0, 2, 1}, {0, 1.1}));
  Polygon tri{{{0, 0}, {10, 0}, {0, 10}}};
  EXPECT_TRUE(containsPoint(tri, {5, 5}));  // on the hypotenuse
  EXPECT_TRUE(containsPoint(tri, {0, 0}));
  EXPECT_FALSE(containsPoint(tri, {6, 6}));
  // Even-odd: the overlap of two squares in one path is outside.
  Path two{{{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}, true}, {{{5, 5}, {15, 5}, {15, 15}, {5, 15}}, true}}};
  EXPECT_FALSE(containsPoint(two, {7, 7}));
  EXPECT_TRUE(containsPoint(two, {2, 2}));
  EXPECT_TRUE(containsPoint(two, {12, 12}));
}

TEST(Geometry, ContainsMatchesRayCastOracle) {
  Generator gen(24);
  int compared = 0;
  for (int i = 0; i < 3000; ++i) {
    auto pts = gen.points(gen.integer(3, 9));
    for (auto& p : pts) p = {gen.real(0, 100), gen.real(0, 100)};
    Point q{gen.real(-10, 110), gen.real(-10, 110)};
    if (oac::testing::boundaryDistance(pts, q) < 1e-6) continue;
    ASSERT_EQ(containsPoint(Polygon{pts}, q), oac::testing::rayCastInside(pts, q));
    ++compared;
  }
  EXPECT_GT(compared, 2900);
}

TEST(Geometry, TransformExamples) {
  EXPECT_EQ(std::get<Rect>(transformShape(Rect{0, 0, 10, 10}, {2, 2}, {5, 5})), (Rect{5, 5, 20, 20}));
  EXPECT_EQ(std::get<Ellipse>(transformShape(Circle{0, 0, 1}, {2, 1}, {0, 0})), (Ellipse{0, 0, 2, 1}));
  EXPECT_EQ(std::get<Circle>(transformShape(Circle{1, 1, 1}, {3, 3}, {0, 0})), (Circle{3, 3, 3}));
  EXPECT_THROW(transformShape(Rect{0, 0, 1, 1}, {0, 1}, {0, 0}), TransformError);
  EXPECT_THROW(transformShape(Rect{0, 0, 1, 1}, {1, -1}, {0, 0}), TransformError);
}

TEST(Geometry, TransformProperties) {
  Generator gen(25);
  for (int i = 0; i < 2000; ++i) {
    SvgShape s = gen.shape();
    EXPECT_EQ(transformShape(s, {1, 1}, {0, 0}), s);

    Scale s1{gen.real(0.1, 4), gen.real(0.1, 4)}, s2{gen.real(0.1, 4), gen.real(0.1, 4)};
    Translation t1{gen.real(-100, 100), gen.real(-100, 100)}, t2{gen.real(-100, 100), gen.real(-100, 100)};
    SvgShape twice = transformShape(transformShape(s, s1, t1), s2, t2);
    SvgShape once = transformShape(s, {s1.sx * s2.sx, s1.sy * s2.sy},
                                   {s2.sx * t1.dx + t2.dx, s2.sy * t1.dy + t2.dy});
    ASSERT_TRUE(approxEqual(twice, once, 1e-9)) << toSvg(twice) << " vs " << toSvg(once);

    Rect box = boundingBox(s);
    Rect expected{s1.sx * box.x + t1.dx, s1.sy * box.y + t1.dy, s1.sx * box.w, s1.sy * box.h};
    Rect got = boundingBox(transformShape(s, s1, t1));
    EXPECT_NEAR(got.x, expected.x, 1e-9);
    EXPECT_NEAR(got.y, expected.y, 1e-9);
    EXPECT_NEAR(got.w, expected.w, 1e-9);
    EXPECT_NEAR(got.h, expected.h, 1e-9);
  }
}

TEST(Geometry, Intersects) {
  EXPECT_FALSE(intersects(Rect{0, 0, 5, 5}, Rect{10, 10, 2, 2}));
  EXPECT_TRUE(intersects(Rect{0, 0, 10, 10}, Rect{10, 10, 2, 2}));
  EXPECT_TRUE(intersects(Rect{0, 0, 10, 10}, Rect{2, 2, 1, 1}));
}

TEST(Percent, EncodeDecode) {
  EXPECT_EQ(percentEncode("http://srv/a b"), "http%3A%2F%2Fsrv%2Fa%20b");
  EXPECT_EQ(percentDecode("http%3a%2F%2Fsrv"), "http://srv");
  EXPECT_EQ(percentDecode("100%"), "100%");
  EXPECT_EQ(formatNumber(0), "0");
  EXPECT_EQ(formatNumber(1.5), "1.5");
  EXPECT_EQ(formatNumber(-0.0), "0");
}
