#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oac/rdf.hpp"

namespace oac {

// --- media fragments ---

struct TemporalDimension {
  double start = 0;  // npt seconds
  std::optional<double> end;
  friend bool operator==(const TemporalDimension&, const TemporalDimension&) = default;
};

enum class SpatialUnit { Pixel, Percent };

struct SpatialDimension {
  SpatialUnit unit = SpatialUnit::Pixel;
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const SpatialDimension&, const SpatialDimension&) = default;
};

/// The dimensions of a media fragment, including the `ptr` by-reference key
/// whose value points at a resource describing the region.
struct MediaFragment {
  std::optional<TemporalDimension> temporal;
  std::optional<SpatialDimension> spatial;
  std::optional<std::string> track;
  std::optional<std::string> id;
  std::optional<rdf::Iri> ptr;
  friend bool operator==(const MediaFragment&, const MediaFragment&) = default;
};

struct FragmentParse {
  MediaFragment fragment;
  /// One entry per ignored key.
  std::vector<std::string> warnings;
};

class FragmentError : public std::runtime_error {
 public:
  enum class Kind { MalformedDimension, DuplicateKey };
  FragmentError(Kind kind, std::string key, const std::string& message)
      : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}
  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

/// `fragment` is the text after '#'. Recognised keys: t, xywh, track, id, ptr.
FragmentParse parseMediaFragment(std::string_view fragment);
/// Keys in the order t, xywh, track, id, ptr; values percent-encoded.
std::string serializeMediaFragment(const MediaFragment& f);

std::string percentDecode(std::string_view s);
std::string percentEncode(std::string_view s);

// --- SVG shapes ---

struct Point {
  double x = 0, y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};
struct Circle {
  double cx = 0, cy = 0, r = 0;
  friend bool operator==(const Circle&, const Circle&) = default;
};
struct Ellipse {
  double cx = 0, cy = 0, rx = 0, ry = 0;
  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};
struct Polygon {
  std::vector<Point> points;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};
struct Subpath {
  std::vector<Point> points;
  bool closed = false;
  friend bool operator==(const Subpath&, const Subpath&) = default;
};
/// Absolute moveto/lineto/closepath only.
struct Path {
  std::vector<Subpath> subpaths;
  friend bool operator==(const Path&, const Path&) = default;
};

/// Coordinates are in full-resolution target pixel space.
using SvgShape = std::variant<Rect, Circle, Ellipse, Polygon, Path>;

class SvgError : public std::runtime_error {
 public:
  enum class Kind { UnsupportedElement, UnsupportedPathCommand, MalformedAttribute };
  SvgError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A single rect, circle, ellipse, polygon or path element.
SvgShape parseSvgConstraint(std::string_view svgSource);
std::string toSvg(const SvgShape& shape);

/// Throws SvgError(MalformedAttribute) when extents or point counts are invalid.
void checkShape(const SvgShape& shape);

Rect boundingBox(const SvgShape& shape);
/// Boundary points count as inside; polygons and paths use the even-odd rule.
bool containsPoint(const SvgShape& shape, Point p);

class TransformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scale {
  double sx = 1, sy = 1;
};
struct Translation {
  double dx = 0, dy = 0;
};

/// Scales about the origin, then translates. A circle scaled unevenly becomes an ellipse.
/// Throws TransformError for non-positive scale factors.
SvgShape transformShape(const SvgShape& shape, Scale scale, Translation translate);

/// Geometric equality within `tolerance`; an ellipse with equal radii equals a circle.
bool approxEqual(const SvgShape& a, const SvgShape& b, double tolerance);
bool intersects(const Rect& a, const Rect& b);

std::string formatNumber(double v);

}  // namespace oac
