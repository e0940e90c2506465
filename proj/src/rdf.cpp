#include "oac/rdf.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "oac/vocabulary.hpp"

namespace oac::rdf {

namespace {

bool isAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool isDigit(char c) { return c >= '0' && c <= '9'; }
bool isAlnum(char c) { return isAlpha(c) || isDigit(c); }

// Characters N-Triples forbids inside IRIREF.
bool forbiddenInIri(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
         c == '^' || c == '`' || c == '\\';
}

std::size_t schemeLength(std::string_view v) {
  if (v.empty() || !isAlpha(v[0])) return 0;
  std::size_t i = 1;
  while (i < v.size() && (isAlnum(v[i]) || v[i] == '+' || v[i] == '-' || v[i] == '.')) ++i;
  if (i >= v.size() || v[i] != ':') return 0;
  return i;
}

bool validIri(std::string_view v) {
  if (schemeLength(v) == 0) return false;
  return std::none_of(v.begin(), v.end(),
                      [](char c) { return forbiddenInIri(static_cast<unsigned char>(c)); });
}

bool validLangTag(std::string_view tag) {
  if (tag.empty()) return false;
  std::size_t i = 0;
  std::size_t n = 0;
  while (i < tag.size() && isAlpha(tag[i])) ++i, ++n;
  if (n == 0) return false;
  while (i < tag.size()) {
    if (tag[i] != '-') return false;
    ++i;
    n = 0;
    while (i < tag.size() && isAlnum(tag[i])) ++i, ++n;
    if (n == 0) return false;
  }
  return true;
}

// Decodes one UTF-8 sequence at `i`; malformed input yields U+FFFD.
char32_t decodeUtf8(std::string_view s, std::size_t& i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : (b0 & 0xF8) == 0xF0 ? 4 : 0;
  if (len == 0) {
    ++i;
    return 0xFFFD;
  }
  char32_t cp = b0 & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    int c = cont(k);
    if (c < 0) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | char32_t(c);
  }
  i += len;
  return cp;
}

void appendEscapedCodepoint(std::string& out, char32_t cp) {
  char buf[16];
  if (cp <= 0xFFFF) {
    std::snprintf(buf, sizeof buf, "\\u%04X", unsigned(cp));
  } else {
    std::snprintf(buf, sizeof buf, "\\U%08X", unsigned(cp));
  }
  out += buf;
}

}  // namespace

// --- terms ---

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!validIri(value_)) throw InvalidTerm("not an absolute IRI: '" + value_ + "'");
}

std::optional<Iri> Iri::tryParse(std::string_view value) {
  if (!validIri(value)) return std::nullopt;
  return Iri(Unchecked{}, std::string(value));
}

std::string_view Iri::scheme() const {
  return std::string_view(value_).substr(0, schemeLength(value_));
}

namespace {
bool schemeIs(std::string_view scheme, std::string_view want) {
  return scheme.size() == want.size() &&
         std::equal(scheme.begin(), scheme.end(), want.begin(),
                    [](char a, char b) { return std::tolower(a) == b; });
}
}  // namespace

bool Iri::isDereferenceable() const {
  auto s = scheme();
  return schemeIs(s, "http") || schemeIs(s, "https");
}

bool Iri::isUrn() const { return schemeIs(scheme(), "urn"); }

Literal Literal::withLanguage(std::string lexical, std::string lang) {
  if (!validLangTag(lang)) throw InvalidTerm("invalid language tag '" + lang + "'");
  Literal l(std::move(lexical));
  l.lang_ = std::move(lang);
  return l;
}

Literal Literal::dateTime(DateTime dt) { return Literal(dt.toIso(), Iri(term::kXsdDateTime)); }

std::optional<DateTime> Literal::asDateTime() const {
  if (!datatype_ || datatype_->str() != term::kXsdDateTime) return std::nullopt;
  return DateTime::tryParseIso(lexical_);
}

BlankNode::BlankNode(std::string label) : label_(std::move(label)) {
  if (label_.empty() || !std::all_of(label_.begin(), label_.end(), isAlnum)) {
    throw InvalidTerm("invalid blank node label '" + label_ + "'");
  }
}

Triple::Triple(Term s, Iri p, Term o)
    : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
  if (isLiteral(subject)) throw InvalidTerm("literal in subject position");
}

namespace detail {

void appendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += char(cp);
  } else if (cp < 0x800) {
    out += char(0xC0 | (cp >> 6));
    out += char(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += char(0xE0 | (cp >> 12));
    out += char(0x80 | ((cp >> 6) & 0x3F));
    out += char(0x80 | (cp & 0x3F));
  } else {
    out += char(0xF0 | (cp >> 18));
    out += char(0x80 | ((cp >> 12) & 0x3F));
    out += char(0x80 | ((cp >> 6) & 0x3F));
    out += char(0x80 | (cp & 0x3F));
  }
}

std::string escapeString(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp = decodeUtf8(s, i);
    switch (cp) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (cp < 0x20 || cp >= 0x7F) {
          appendEscapedCodepoint(out, cp);
        } else {
          out += char(cp);
        }
    }
  }
  return out;
}

std::string escapeIri(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp = decodeUtf8(s, i);
    if (cp >= 0x80) {
      appendEscapedCodepoint(out, cp);
    } else {
      out += char(cp);
    }
  }
  return out;
}

}  // namespace detail

std::string toNTriples(const Term& term) {
  struct Visitor {
    std::string operator()(const Iri& i) const { return "<" + detail::escapeIri(i.str()) + ">"; }
    std::string operator()(const BlankNode& b) const { return "_:" + b.label(); }
    std::string operator()(const Literal& l) const {
      std::string out = "\"" + detail::escapeString(l.lexical()) + "\"";
      if (l.language()) {
        out += "@" + *l.language();
      } else if (l.datatype()) {
        out += "^^<" + detail::escapeIri(l.datatype()->str()) + ">";
      }
      return out;
    }
  };
  return std::visit(Visitor{}, term);
}

// --- graph ---

std::vector<Triple> Graph::about(const Term& subject) const {
  auto [lo, hi] = triples_.equal_range(detail::SubjectKey{subject});
  return {lo, hi};
}

std::vector<Term> Graph::objects(const Term& subject, const Iri& predicate) const {
  auto [lo, hi] = triples_.equal_range(detail::SubjectPredicateKey{subject, predicate});
  std::vector<Term> out;
  for (auto it = lo; it != hi; ++it) out.push_back(it->object);
  return out;
}

std::vector<Term> Graph::subjects(const Iri& predicate, const Term& object) const {
  std::vector<Term> out;
  for (const auto& t : triples_) {
    if (t.predicate == predicate && t.object == object) out.push_back(t.subject);
  }
  return out;
}

bool Graph::hasType(const Term& subject, const Iri& type) const {
  return contains(Triple(subject, Iri(term::kRdfType), type));
}

namespace {

// Backtracking search for a blank-node bijection; adequate for annotation-sized graphs.
class IsoMatcher {
 public:
  IsoMatcher(const Graph& a, const Graph& b) {
    for (const auto& t : a) (hasBlank(t) ? blankA_ : groundA_).push_back(t);
    for (const auto& t : b) (hasBlank(t) ? blankB_ : groundB_).push_back(t);
    for (const auto& t : blankB_) bIndex_.insert(t);
  }

  bool run() {
    if (groundA_ != groundB_ || blankA_.size() != blankB_.size()) return false;
    return extend(0);
  }

 private:
  static bool hasBlank(const Triple& t) { return isBlank(t.subject) || isBlank(t.object); }

  std::optional<Term> mapped(const Term& t) const {
    if (!isBlank(t)) return t;
    auto it = forward_.find(std::get<BlankNode>(t).label());
    if (it == forward_.end()) return std::nullopt;
    return Term(BlankNode(it->second));
  }

  bool bind(const Term& from, const Term& to, std::vector<std::string>& added) {
    if (isBlank(from) != isBlank(to)) return false;
    if (!isBlank(from)) return from == to;
    const auto& fl = std::get<BlankNode>(from).label();
    const auto& tl = std::get<BlankNode>(to).label();
    if (auto it = forward_.find(fl); it != forward_.end()) return it->second == tl;
    if (backward_.count(tl)) return false;
    forward_[fl] = tl;
    backward_[tl] = fl;
    added.push_back(fl);
    return true;
  }

  void unbind(const std::vector<std::string>& added) {
    for (const auto& fl : added) {
      backward_.erase(forward_[fl]);
      forward_.erase(fl);
    }
  }

  bool extend(std::size_t i) {
    if (i == blankA_.size()) return true;
    const Triple& t = blankA_[i];
    auto s = mapped(t.subject);
    auto o = mapped(t.object);
    if (s && o) {
      return bIndex_.count(Triple(*s, t.predicate, *o)) && extend(i + 1);
    }
    for (const auto& cand : blankB_) {
      if (cand.predicate != t.predicate) continue;
      std::vector<std::string> added;
      if (bind(t.subject, cand.subject, added) && bind(t.object, cand.object, added) &&
          extend(i + 1)) {
        return true;
      }
      unbind(added);
    }
    return false;
  }

  std::vector<Triple> groundA_, groundB_, blankA_, blankB_;
  std::set<Triple> bIndex_;
  std::unordered_map<std::string, std::string> forward_, backward_;
};

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  return IsoMatcher(a, b).run();
}

// --- formats ---

std::string_view mediaType(Format f) {
  return f == Format::NTriples ? "application/n-triples" : "text/turtle";
}

std::optional<Format> formatFromMediaType(std::string_view mt) {
  auto semi = mt.find(';');
  if (semi != std::string_view::npos) mt = mt.substr(0, semi);
  while (!mt.empty() && mt.back() == ' ') mt.remove_suffix(1);
  while (!mt.empty() && mt.front() == ' ') mt.remove_prefix(1);
  if (mt == "application/n-triples" || mt == "text/plain") return Format::NTriples;
  if (mt == "text/turtle" || mt == "application/x-turtle") return Format::Turtle;
  return std::nullopt;
}

std::optional<Format> formatFromPath(std::string_view path) {
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() && path.substr(path.size() - suf.size()) == suf;
  };
  if (ends(".nt")) return Format::NTriples;
  if (ends(".ttl")) return Format::Turtle;
  return std::nullopt;
}

// --- namespaces ---

const NamespaceTable& NamespaceTable::standard() {
  static const NamespaceTable table = [] {
    NamespaceTable t;
    t.bind("oac", ns::kOac);
    t.bind("cnt", ns::kCnt);
    t.bind("dcterms", ns::kDcterms);
    t.bind("rdf", ns::kRdf);
    t.bind("rdfs", ns::kRdfs);
    t.bind("xsd", ns::kXsd);
    t.bind("owl", ns::kOwl);
    return t;
  }();
  return table;
}

void NamespaceTable::bind(std::string prefix, std::string ns) { map_[std::move(prefix)] = std::move(ns); }

std::optional<std::string> NamespaceTable::lookup(std::string_view prefix) const {
  auto it = map_.find(prefix);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Iri NamespaceTable::expand(std::string_view name) const {
  auto colon = name.find(':');
  if (colon == std::string_view::npos) throw InvalidTerm("not a prefixed name: " + std::string(name));
  auto ns = lookup(name.substr(0, colon));
  if (!ns) throw InvalidTerm("unknown prefix in " + std::string(name));
  return Iri(*ns + std::string(name.substr(colon + 1)));
}

namespace {
bool plainLocalName(std::string_view local) {
  if (local.empty()) return false;
  if (!(isAlpha(local[0]) || local[0] == '_')) return false;
  return std::all_of(local.begin(), local.end(),
                     [](char c) { return isAlnum(c) || c == '_' || c == '-'; });
}
}  // namespace

std::optional<std::string> NamespaceTable::compact(const Iri& iri) const {
  const std::string& v = iri.str();
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : map_) {
    const auto& ns = entry.second;
    if (v.size() > ns.size() && v.compare(0, ns.size(), ns) == 0 &&
        plainLocalName(std::string_view(v).substr(ns.size())) &&
        (!best || ns.size() > best->second.size())) {
      best = &entry;
    }
  }
  if (!best) return std::nullopt;
  return best->first + ":" + v.substr(best->second.size());
}

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

// --- canonical N-Triples ---

namespace {

std::string renderTriple(const Triple& t, const std::function<std::string(const Term&)>& term) {
  return term(t.subject) + " " + toNTriples(t.predicate) + " " + term(t.object) + " .";
}

std::string serializeNTriples(const Graph& g) {
  auto skeleton = [](const Term& t) { return isBlank(t) ? std::string("_:") : toNTriples(t); };
  std::vector<std::pair<std::string, const Triple*>> order;
  order.reserve(g.size());
  for (const auto& t : g) order.emplace_back(renderTriple(t, skeleton), &t);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::unordered_map<std::string, std::string> relabel;
  auto canonical = [&](const Term& t) -> std::string {
    if (!isBlank(t)) return toNTriples(t);
    const auto& label = std::get<BlankNode>(t).label();
    auto [it, inserted] = relabel.try_emplace(label);
    if (inserted) it->second = "b" + std::to_string(relabel.size() - 1);
    return "_:" + it->second;
  };
  std::vector<std::string> lines;
  lines.reserve(order.size());
  for (const auto& [_, t] : order) lines.push_back(renderTriple(*t, canonical));
  std::sort(lines.begin(), lines.end());

  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string serializeTurtle(const Graph& g, const NamespaceTable& ns);

std::string serialize(const Graph& graph, Format format, const NamespaceTable& namespaces) {
  if (format == Format::NTriples) return serializeNTriples(graph);
  return serializeTurtle(graph, namespaces);
}

}  // namespace oac::rdf
