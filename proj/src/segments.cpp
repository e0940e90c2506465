#include "oac/segments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace oac {

// --- numbers and percent-encoding ---

std::string formatNumber(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::optional<double> parseNonNegative(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v) || v < 0) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int hexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string percentDecode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && hexValue(s[i + 1]) >= 0 && hexValue(s[i + 2]) >= 0) {
      out += char(hexValue(s[i + 1]) * 16 + hexValue(s[i + 2]));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string percentEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += char(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

// --- media fragments ---

namespace {

using FK = FragmentError::Kind;

[[noreturn]] void malformed(const std::string& key, const std::string& why) {
  throw FragmentError(FK::MalformedDimension, key, "malformed '" + key + "' dimension: " + why);
}

TemporalDimension parseTemporal(std::string_view value) {
  if (value.substr(0, 4) == "npt:") value.remove_prefix(4);
  auto parts = split(value, ',');
  if (parts.size() > 2) malformed("t", "expected start[,end]");
  TemporalDimension t;
  if (!parts[0].empty()) {
    auto start = parseNonNegative(parts[0]);
    if (!start) malformed("t", "start is not a non-negative number of seconds");
    t.start = *start;
  } else if (parts.size() == 1) {
    malformed("t", "empty value");
  }
  if (parts.size() == 2) {
    auto end = parseNonNegative(parts[1]);
    if (!end) malformed("t", "end is not a non-negative number of seconds");
    if (*end <= t.start) malformed("t", "end must be after start");
    t.end = *end;
  }
  return t;
}

SpatialDimension parseSpatial(std::string_view value) {
  SpatialDimension s;
  if (value.substr(0, 6) == "pixel:") {
    value.remove_prefix(6);
  } else if (value.substr(0, 8) == "percent:") {
    value.remove_prefix(8);
    s.unit = SpatialUnit::Percent;
  }
  auto parts = split(value, ',');
  if (parts.size() != 4) malformed("xywh", "expected four comma-separated numbers");
  double* fields[] = {&s.x, &s.y, &s.w, &s.h};
  for (std::size_t i = 0; i < 4; ++i) {
    auto v = parseNonNegative(parts[i]);
    if (!v) malformed("xywh", "'" + std::string(parts[i]) + "' is not a non-negative number");
    if (s.unit == SpatialUnit::Percent && *v > 100) malformed("xywh", "percent value above 100");
    *fields[i] = *v;
  }
  return s;
}

}  // namespace

FragmentParse parseMediaFragment(std::string_view fragment) {
  if (!fragment.empty() && fragment.front() == '#') fragment.remove_prefix(1);
  FragmentParse result;
  MediaFragment& f = result.fragment;
  std::set<std::string> seen;
  if (fragment.empty()) return result;
  for (auto pair : split(fragment, '&')) {
    if (pair.empty()) continue;
    auto eq = pair.find('=');
    std::string key = percentDecode(pair.substr(0, eq));
    bool known = key == "t" || key == "xywh" || key == "track" || key == "id" || key == "ptr";
    if (!known) {
      result.warnings.push_back("ignored unknown key '" + key + "'");
      continue;
    }
    if (eq == std::string_view::npos) malformed(key, "missing '='");
    if (!seen.insert(key).second) {
      throw FragmentError(FK::DuplicateKey, key, "duplicate key '" + key + "'");
    }
    std::string_view raw = pair.substr(eq + 1);
    if (key == "t") {
      f.temporal = parseTemporal(percentDecode(raw));
    } else if (key == "xywh") {
      f.spatial = parseSpatial(percentDecode(raw));
    } else if (key == "track") {
      f.track = percentDecode(raw);
    } else if (key == "id") {
      f.id = percentDecode(raw);
    } else {
      auto iri = rdf::Iri::tryParse(percentDecode(raw));
      if (!iri) malformed("ptr", "value is not an absolute IRI");
      f.ptr = std::move(*iri);
    }
  }
  return result;
}

std::string serializeMediaFragment(const MediaFragment& f) {
  std::vector<std::string> parts;
  if (f.temporal) {
    std::string v = "t=" + formatNumber(f.temporal->start);
    if (f.temporal->end) v += "," + formatNumber(*f.temporal->end);
    parts.push_back(std::move(v));
  }
  if (f.spatial) {
    const auto& s = *f.spatial;
    std::string v = "xywh=";
    if (s.unit == SpatialUnit::Percent) v += "percent:";
    v += formatNumber(s.x) + "," + formatNumber(s.y) + "," + formatNumber(s.w) + "," +
         formatNumber(s.h);
    parts.push_back(std::move(v));
  }
  if (f.track) parts.push_back("track=" + percentEncode(*f.track));
  if (f.id) parts.push_back("id=" + percentEncode(*f.id));
  if (f.ptr) parts.push_back("ptr=" + percentEncode(f.ptr->str()));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '&';
    out += parts[i];
  }
  return out;
}

// --- geometry ---

namespace {

struct Bounds {
  double minX = std::numeric_limits<double>::infinity();
  double minY = std::numeric_limits<double>::infinity();
  double maxX = -std::numeric_limits<double>::infinity();
  double maxY = -std::numeric_limits<double>::infinity();
  void add(Point p) {
    minX = std::min(minX, p.x);
    minY = std::min(minY, p.y);
    maxX = std::max(maxX, p.x);
    maxY = std::max(maxY, p.y);
  }
  Rect rect() const { return {minX, minY, maxX - minX, maxY - minY}; }
};

constexpr double kBoundaryEpsilon = 1e-9;

bool onSegment(Point p, Point a, Point b) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double len2 = dx * dx + dy * dy;
  double t = len2 == 0 ? 0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  double qx = a.x + t * dx - p.x, qy = a.y + t * dy - p.y;
  return std::sqrt(qx * qx + qy * qy) <= kBoundaryEpsilon;
}

// Even-odd over a set of closed rings; true on any ring boundary.
bool ringsContain(const std::vector<const std::vector<Point>*>& rings, Point p) {
  bool inside = false;
  for (const auto* ring : rings) {
    const auto& pts = *ring;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
      Point a = pts[i], b = pts[(i + 1) % n];
      if (onSegment(p, a, b)) return true;
      if ((a.y > p.y) != (b.y > p.y)) {
        double xCross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < xCross) inside = !inside;
      }
    }
  }
  return inside;
}

Point apply(Point p, Scale s, Translation t) { return {p.x * s.sx + t.dx, p.y * s.sy + t.dy}; }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool near(Point a, Point b, double tol) { return near(a.x, b.x, tol) && near(a.y, b.y, tol); }

}  // namespace

Rect boundingBox(const SvgShape& shape) {
  if (const auto* r = std::get_if<Rect>(&shape)) return *r;
  if (const auto* c = std::get_if<Circle>(&shape)) return {c->cx - c->r, c->cy - c->r, 2 * c->r, 2 * c->r};
  if (const auto* e = std::get_if<Ellipse>(&shape)) {
    return {e->cx - e->rx, e->cy - e->ry, 2 * e->rx, 2 * e->ry};
  }
  Bounds b;
  if (const auto* poly = std::get_if<Polygon>(&shape)) {
    for (auto p : poly->points) b.add(p);
  } else {
    for (const auto& sp : std::get<Path>(shape).subpaths) {
      for (auto p : sp.points) b.add(p);
    }
  }
  return b.rect();
}

bool containsPoint(const SvgShape& shape, Point p) {
  if (const auto* r = std::get_if<Rect>(&shape)) {
    return p.x >= r->x && p.x <= r->x + r->w && p.y >= r->y && p.y <= r->y + r->h;
  }
  if (const auto* c = std::get_if<Circle>(&shape)) {
    double dx = p.x - c->cx, dy = p.y - c->cy;
    return dx * dx + dy * dy <= c->r * c->r;
  }
  if (const auto* e = std::get_if<Ellipse>(&shape)) {
    double dx = (p.x - e->cx) / e->rx, dy = (p.y - e->cy) / e->ry;
    return dx * dx + dy * dy <= 1.0;
  }
  std::vector<const std::vector<Point>*> rings;
  if (const auto* poly = std::get_if<Polygon>(&shape)) {
    rings.push_back(&poly->points);
  } else {
    for (const auto& sp : std::get<Path>(shape).subpaths) rings.push_back(&sp.points);
  }
  return ringsContain(rings, p);
}

SvgShape transformShape(const SvgShape& shape, Scale s, Translation t) {
  if (!(s.sx > 0) || !(s.sy > 0) || !std::isfinite(s.sx) || !std::isfinite(s.sy)) {
    throw TransformError("scale factors must be positive");
  }
  if (const auto* r = std::get_if<Rect>(&shape)) {
    return Rect{r->x * s.sx + t.dx, r->y * s.sy + t.dy, r->w * s.sx, r->h * s.sy};
  }
  if (const auto* c = std::get_if<Circle>(&shape)) {
    Point centre = apply({c->cx, c->cy}, s, t);
    if (s.sx == s.sy) return Circle{centre.x, centre.y, c->r * s.sx};
    return Ellipse{centre.x, centre.y, c->r * s.sx, c->r * s.sy};
  }
  if (const auto* e = std::get_if<Ellipse>(&shape)) {
    Point centre = apply({e->cx, e->cy}, s, t);
    return Ellipse{centre.x, centre.y, e->rx * s.sx, e->ry * s.sy};
  }
  if (const auto* poly = std::get_if<Polygon>(&shape)) {
    Polygon out;
    for (auto p : poly->points) out.points.push_back(apply(p, s, t));
    return out;
  }
  Path out;
  for (const auto& sp : std::get<Path>(shape).subpaths) {
    Subpath o{{}, sp.closed};
    for (auto p : sp.points) o.points.push_back(apply(p, s, t));
    out.subpaths.push_back(std::move(o));
  }
  return out;
}

bool approxEqual(const SvgShape& a, const SvgShape& b, double tol) {
  auto asEllipse = [](const SvgShape& s) -> std::optional<Ellipse> {
    if (const auto* c = std::get_if<Circle>(&s)) return Ellipse{c->cx, c->cy, c->r, c->r};
    if (const auto* e = std::get_if<Ellipse>(&s)) return *e;
    return std::nullopt;
  };
  if (auto ea = asEllipse(a)) {
    auto eb = asEllipse(b);
    return eb && near(ea->cx, eb->cx, tol) && near(ea->cy, eb->cy, tol) &&
           near(ea->rx, eb->rx, tol) && near(ea->ry, eb->ry, tol);
  }
  if (a.index() != b.index()) return false;
  if (const auto* ra = std::get_if<Rect>(&a)) {
    const auto& rb = std::get<Rect>(b);
    return near(ra->x, rb.x, tol) && near(ra->y, rb.y, tol) && near(ra->w, rb.w, tol) &&
           near(ra->h, rb.h, tol);
  }
  auto samePoints = [&](const std::vector<Point>& x, const std::vector<Point>& y) {
    return x.size() == y.size() &&
           std::equal(x.begin(), x.end(), y.begin(), [&](Point p, Point q) { return near(p, q, tol); });
  };
  if (const auto* pa = std::get_if<Polygon>(&a)) return samePoints(pa->points, std::get<Polygon>(b).points);
  const auto& sa = std::get<Path>(a).subpaths;
  const auto& sb = std::get<Path>(b).subpaths;
  return sa.size() == sb.size() &&
         std::equal(sa.begin(), sa.end(), sb.begin(), [&](const Subpath& x, const Subpath& y) {
           return x.closed == y.closed && samePoints(x.points, y.points);
         });
}

bool intersects(const Rect& a, const Rect& b) {
  return a.x <= b.x + b.w && b.x <= a.x + a.w && a.y <= b.y + b.h && b.y <= a.y + a.h;
}

}  // namespace oac
