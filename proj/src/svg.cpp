// Single-element SVG reader/writer for region constraints.

#include <charconv>
#include <cmath>
#include <map>

#include "oac/segments.hpp"

namespace oac {

namespace {

using SK = SvgError::Kind;

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

[[noreturn]] void malformed(const std::string& msg) { throw SvgError(SK::MalformedAttribute, msg); }

struct Element {
  std::string name;
  std::map<std::string, std::string, std::less<>> attributes;
  bool hasContent = false;
};

std::string decodeEntities(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != '&') {
      out += v[i];
      continue;
    }
    auto semi = v.find(';', i);
    if (semi == std::string_view::npos) malformed("unterminated entity");
    auto ent = v.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else malformed("unknown entity &" + std::string(ent) + ";");
    i = semi;
  }
  return out;
}

Element readElement(std::string_view s) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && isSpace(s[i])) ++i;
  };
  auto isNameChar = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
  };
  skip();
  if (i >= s.size() || s[i] != '<') malformed("expected an SVG element");
  ++i;
  Element el;
  while (i < s.size() && isNameChar(s[i])) el.name += s[i++];
  if (el.name.empty()) malformed("missing element name");
  std::string qualified = el.name;
  if (auto colon = el.name.rfind(':'); colon != std::string::npos) el.name = el.name.substr(colon + 1);

  for (;;) {
    skip();
    if (i >= s.size()) malformed("unterminated element");
    if (s[i] == '/') {
      if (i + 1 >= s.size() || s[i + 1] != '>') malformed("expected '/>'");
      i += 2;
      break;
    }
    if (s[i] == '>') {
      ++i;
      auto close = s.find("</", i);
      if (close == std::string_view::npos) malformed("missing closing tag");
      for (std::size_t k = i; k < close; ++k) {
        if (!isSpace(s[k])) el.hasContent = true;
      }
      i = close + 2;
      std::string closing;
      while (i < s.size() && isNameChar(s[i])) closing += s[i++];
      skip();
      if (closing != qualified || i >= s.size() || s[i] != '>') malformed("mismatched closing tag");
      ++i;
      break;
    }
    std::string attr;
    while (i < s.size() && isNameChar(s[i])) attr += s[i++];
    if (attr.empty()) malformed("bad attribute syntax");
    skip();
    if (i >= s.size() || s[i] != '=') malformed("expected '=' after " + attr);
    ++i;
    skip();
    if (i >= s.size() || (s[i] != '"' && s[i] != '\'')) malformed("expected quoted value for " + attr);
    char q = s[i++];
    auto end = s.find(q, i);
    if (end == std::string_view::npos) malformed("unterminated value for " + attr);
    if (!el.attributes.emplace(attr, decodeEntities(s.substr(i, end - i))).second) {
      malformed("duplicate attribute " + attr);
    }
    i = end + 1;
  }
  skip();
  if (i != s.size()) malformed("trailing content after element");
  return el;
}

// SVG number: optional sign, digits with optional fraction, optional exponent.
class NumberScanner {
 public:
  explicit NumberScanner(std::string_view s) : s_(s) {}

  void skipSeparators() {
    while (pos_ < s_.size() && (isSpace(s_[pos_]) || s_[pos_] == ',')) ++pos_;
  }
  bool atEnd() {
    skipSeparators();
    return pos_ >= s_.size();
  }
  bool atNumber() {
    skipSeparators();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }
  char peekChar() {
    skipSeparators();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char takeChar() { return s_[pos_++]; }

  double number(const char* what) {
    skipSeparators();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
    bool digits = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, digits = true;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, digits = true;
    }
    if (digits && pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      bool expDigits = false;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_, expDigits = true;
      if (!expDigits) pos_ = save;
    }
    if (!digits) malformed(std::string("expected a number in ") + what);
    std::string_view tok = s_.substr(start, pos_ - start);
    if (tok.front() == '+') tok.remove_prefix(1);
    double v = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || end != tok.data() + tok.size() || !std::isfinite(v)) {
      malformed(std::string("bad number in ") + what);
    }
    return v;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

double numericAttribute(const Element& el, const char* name, std::optional<double> fallback) {
  auto it = el.attributes.find(name);
  if (it == el.attributes.end()) {
    if (fallback) return *fallback;
    malformed(el.name + " requires attribute " + name);
  }
  NumberScanner scan(it->second);
  double v = scan.number(name);
  if (!scan.atEnd()) malformed(std::string("attribute ") + name + " is not a plain number");
  return v;
}

std::vector<Point> parsePoints(std::string_view text) {
  NumberScanner scan(text);
  std::vector<Point> pts;
  while (!scan.atEnd()) {
    double x = scan.number("points");
    if (scan.atEnd()) malformed("points has an odd number of coordinates");
    double y = scan.number("points");
    pts.push_back({x, y});
  }
  return pts;
}

Path parsePathData(std::string_view d) {
  NumberScanner scan(d);
  Path path;
  char command = 0;
  Point subpathStart;
  auto readPoint = [&] {
    double x = scan.number("d");
    double y = scan.number("d");
    return Point{x, y};
  };
  while (!scan.atEnd()) {
    if (!scan.atNumber()) {
      command = scan.takeChar();
      if (command == 'Z' || command == 'z') {
        if (path.subpaths.empty()) malformed("path data must begin with M");
        path.subpaths.back().closed = true;
        continue;
      }
      if (command != 'M' && command != 'L') {
        throw SvgError(SK::UnsupportedPathCommand,
                       std::string("unsupported path command '") + command +
                           "'; only absolute M, L and Z are supported");
      }
    } else if (command == 0) {
      malformed("path data must begin with M");
    }
    if (command == 'M') {
      subpathStart = readPoint();
      path.subpaths.push_back({{subpathStart}, false});
      command = 'L';  // further pairs are implicit linetos
    } else if (command == 'L') {
      if (path.subpaths.empty()) malformed("path data must begin with M");
      if (path.subpaths.back().closed) path.subpaths.push_back({{subpathStart}, false});
      path.subpaths.back().points.push_back(readPoint());
    } else {
      malformed("coordinates after Z need a command");
    }
  }
  if (path.subpaths.empty()) malformed("empty path data");
  return path;
}

}  // namespace

void checkShape(const SvgShape& shape) {
  auto finite = [](std::initializer_list<double> vs) {
    for (double v : vs) {
      if (!std::isfinite(v)) malformed("non-finite coordinate");
    }
  };
  if (const auto* r = std::get_if<Rect>(&shape)) {
    finite({r->x, r->y, r->w, r->h});
    if (!(r->w > 0 && r->h > 0)) malformed("rect needs positive width and height");
  } else if (const auto* c = std::get_if<Circle>(&shape)) {
    finite({c->cx, c->cy, c->r});
    if (!(c->r > 0)) malformed("circle needs a positive radius");
  } else if (const auto* e = std::get_if<Ellipse>(&shape)) {
    finite({e->cx, e->cy, e->rx, e->ry});
    if (!(e->rx > 0 && e->ry > 0)) malformed("ellipse needs positive radii");
  } else if (const auto* p = std::get_if<Polygon>(&shape)) {
    if (p->points.size() < 3) malformed("polygon needs at least 3 points");
    for (auto pt : p->points) finite({pt.x, pt.y});
  } else {
    const auto& path = std::get<Path>(shape);
    if (path.subpaths.empty()) malformed("path has no subpaths");
    for (const auto& sp : path.subpaths) {
      if (sp.points.empty()) malformed("empty subpath");
      for (auto pt : sp.points) finite({pt.x, pt.y});
    }
  }
}

SvgShape parseSvgConstraint(std::string_view source) {
  Element el = readElement(source);
  if (el.attributes.count("transform")) malformed("the transform attribute is not supported");
  SvgShape shape;
  if (el.name == "rect") {
    shape = Rect{numericAttribute(el, "x", 0.0), numericAttribute(el, "y", 0.0),
                 numericAttribute(el, "width", std::nullopt), numericAttribute(el, "height", std::nullopt)};
  } else if (el.name == "circle") {
    shape = Circle{numericAttribute(el, "cx", 0.0), numericAttribute(el, "cy", 0.0),
                   numericAttribute(el, "r", std::nullopt)};
  } else if (el.name == "ellipse") {
    shape = Ellipse{numericAttribute(el, "cx", 0.0), numericAttribute(el, "cy", 0.0),
                    numericAttribute(el, "rx", std::nullopt), numericAttribute(el, "ry", std::nullopt)};
  } else if (el.name == "polygon") {
    auto it = el.attributes.find("points");
    if (it == el.attributes.end()) malformed("polygon requires attribute points");
    shape = Polygon{parsePoints(it->second)};
  } else if (el.name == "path") {
    auto it = el.attributes.find("d");
    if (it == el.attributes.end()) malformed("path requires attribute d");
    shape = parsePathData(it->second);
  } else {
    throw SvgError(SK::UnsupportedElement, "unsupported SVG element <" + el.name + ">");
  }
  if (el.hasContent) malformed("element content is not supported");
  checkShape(shape);
  return shape;
}

std::string toSvg(const SvgShape& shape) {
  auto attr = [](const char* name, double v) { return std::string(" ") + name + "=\"" + formatNumber(v) + "\""; };
  if (const auto* r = std::get_if<Rect>(&shape)) {
    return "<rect" + attr("x", r->x) + attr("y", r->y) + attr("width", r->w) + attr("height", r->h) + "/>";
  }
  if (const auto* c = std::get_if<Circle>(&shape)) {
    return "<circle" + attr("cx", c->cx) + attr("cy", c->cy) + attr("r", c->r) + "/>";
  }
  if (const auto* e = std::get_if<Ellipse>(&shape)) {
    return "<ellipse" + attr("cx", e->cx) + attr("cy", e->cy) + attr("rx", e->rx) + attr("ry", e->ry) + "/>";
  }
  if (const auto* p = std::get_if<Polygon>(&shape)) {
    std::string pts;
    for (auto pt : p->points) {
      if (!pts.empty()) pts += ' ';
      pts += formatNumber(pt.x) + "," + formatNumber(pt.y);
    }
    return "<polygon points=\"" + pts + "\"/>";
  }
  std::string d;
  for (const auto& sp : std::get<Path>(shape).subpaths) {
    for (std::size_t i = 0; i < sp.points.size(); ++i) {
      if (!d.empty()) d += ' ';
      d += (i == 0 ? "M " : "L ") + formatNumber(sp.points[i].x) + " " + formatNumber(sp.points[i].y);
    }
    if (sp.closed) d += " Z";
  }
  return "<path d=\"" + d + "\"/>";
}

}  // namespace oac
