// N-Triples and Turtle-subset reader, Turtle writer.

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <vector>

#include "oac/rdf.hpp"
#include "oac/vocabulary.hpp"

namespace oac::rdf {

namespace {

bool isAlpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool isDigit(char c) { return c >= '0' && c <= '9'; }
bool isAlnum(char c) { return isAlpha(c) || isDigit(c); }
bool isHex(char c) { return isDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }
bool isNameChar(char c) {
  return isAlnum(c) || c == '_' || c == '-' || c == '.' || static_cast<unsigned char>(c) >= 0x80;
}

class Reader {
 public:
  Reader(std::string_view text, Format format) : in_(text), turtle_(format == Format::Turtle) {}

  Graph run() {
    skipWs();
    while (!atEnd()) {
      if (turtle_ && (peek() == '@' || startsWithKeyword("PREFIX") || startsWithKeyword("BASE"))) {
        directive();
      } else {
        statement();
      }
      skipWs();
    }
    return std::move(graph_);
  }

 private:
  // --- error reporting ---
  [[noreturn]] void fail(const std::string& msg, ParseError::Kind kind = ParseError::Kind::Syntax) {
    throw ParseError(kind, line_, col_, msg);
  }

  bool atEnd() const { return pos_ >= in_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }
  char get() {
    char c = in_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void expect(char c) {
    skipWs();
    if (atEnd() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  bool startsWithKeyword(std::string_view kw) const {
    if (in_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(in_[pos_ + i])) != kw[i]) return false;
    }
    char after = pos_ + kw.size() < in_.size() ? in_[pos_ + kw.size()] : ' ';
    return !isNameChar(after) && after != ':';
  }

  void skipWs() {
    while (!atEnd()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else if (c == '#') {
        while (!atEnd() && peek() != '\n') get();
      } else {
        break;
      }
    }
  }

  // --- directives ---
  void directive() {
    bool sparqlStyle = peek() != '@';
    if (!sparqlStyle) get();
    if (startsWithKeyword("BASE") || startsWithKeyword("base")) {
      fail("base directives are not supported; all IRIs must be absolute",
           ParseError::Kind::RelativeIri);
    }
    if (!(sparqlStyle ? startsWithKeyword("PREFIX") : in_.substr(pos_, 6) == "prefix")) {
      fail("unknown directive");
    }
    for (int i = 0; i < 6; ++i) get();
    skipWs();
    std::string prefix;
    while (!atEnd() && isNameChar(peek())) prefix += get();
    if (atEnd() || peek() != ':') fail("expected ':' after prefix name");
    get();
    skipWs();
    Iri ns = iriRef();
    prefixes_[prefix] = ns.str();
    if (!sparqlStyle) expect('.');
  }

  // --- statements ---
  void statement() {
    Term subject = subjectTerm();
    if (turtle_) {
      predicateObjectList(subject);
    } else {
      skipWs();
      Iri predicate = iriRef();
      skipWs();
      addTriple(subject, predicate, objectTerm());
    }
    expect('.');
  }

  void predicateObjectList(const Term& subject) {
    for (;;) {
      skipWs();
      Iri predicate = verb();
      for (;;) {
        skipWs();
        addTriple(subject, predicate, objectTerm());
        skipWs();
        if (peek() != ',') break;
        get();
      }
      skipWs();
      if (peek() != ';') break;
      while (peek() == ';') {
        get();
        skipWs();
      }
      if (peek() == '.' || atEnd()) break;
    }
  }

  void addTriple(const Term& s, const Iri& p, Term o) { graph_.insert(Triple(s, p, std::move(o))); }

  Iri verb() {
    if (peek() == 'a') {
      char after = peek(1);
      if (after == ' ' || after == '\t' || after == '\n' || after == '\r' || after == '<' ||
          after == '"') {
        get();
        return Iri(term::kRdfType);
      }
    }
    return iri();
  }

  Term subjectTerm() {
    skipWs();
    if (peek() == '_' && peek(1) == ':') return blankNode();
    if (peek() == '"' || peek() == '\'') fail("literal in subject position");
    return iri();
  }

  Term objectTerm() {
    skipWs();
    char c = peek();
    if (c == '_' && peek(1) == ':') return blankNode();
    if (c == '"' || (turtle_ && c == '\'')) return literal();
    if (c == '<') return iriRef();
    if (turtle_) {
      if (isDigit(c) || c == '+' || c == '-' || (c == '.' && isDigit(peek(1)))) return numeric();
      if (startsWithKeyword("TRUE") && in_.substr(pos_, 4) == "true") return boolean("true");
      if (startsWithKeyword("FALSE") && in_.substr(pos_, 5) == "false") return boolean("false");
      if (c == '[' || c == '(') fail("blank node property lists and collections are not supported");
      return prefixedName();
    }
    fail("expected IRI, blank node or literal");
  }

  Iri iri() {
    skipWs();
    if (peek() == '<') return iriRef();
    if (!turtle_) fail("expected '<'");
    return prefixedName();
  }

  Iri iriRef() {
    if (peek() != '<') fail("expected '<'");
    get();
    std::string value;
    for (;;) {
      if (atEnd()) fail("unterminated IRI");
      char c = get();
      if (c == '>') break;
      if (c == '\\') {
        value += unicodeEscape();
      } else if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' ||
                 c == '}' || c == '|' || c == '^' || c == '`') {
        fail("illegal character in IRI");
      } else {
        value += c;
      }
    }
    auto iri = Iri::tryParse(value);
    if (!iri) fail("relative or invalid IRI <" + value + ">", ParseError::Kind::RelativeIri);
    return *iri;
  }

  std::string unicodeEscape() {
    if (atEnd()) fail("bad escape");
    char kind = get();
    int n = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (n == 0) fail("bad escape in IRI");
    return hexCodepoint(n);
  }

  std::string hexCodepoint(int n) {
    std::uint32_t cp = 0;
    for (int i = 0; i < n; ++i) {
      if (atEnd() || !isHex(peek())) fail("bad unicode escape");
      char h = get();
      cp = cp * 16 + (isDigit(h) ? h - '0' : (std::tolower(h) - 'a' + 10));
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point");
    std::string out;
    detail::appendUtf8(out, char32_t(cp));
    return out;
  }

  Iri prefixedName() {
    std::string prefix;
    while (!atEnd() && isNameChar(peek())) prefix += get();
    if (peek() != ':') fail("expected prefixed name");
    get();
    std::string local;
    while (!atEnd()) {
      char c = peek();
      if (c == '%' && isHex(peek(1)) && isHex(peek(2))) {
        local += get();
        local += get();
        local += get();
      } else if (c == '\\' && pos_ + 1 < in_.size()) {
        get();
        local += get();
      } else if (isNameChar(c) || c == ':') {
        local += get();
      } else {
        break;
      }
    }
    // A trailing '.' ends the statement rather than the name.
    while (!local.empty() && local.back() == '.') {
      local.pop_back();
      --pos_;
      --col_;
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("unknown prefix '" + prefix + ":'", ParseError::Kind::UnknownPrefix);
    auto iri = Iri::tryParse(it->second + local);
    if (!iri) fail("invalid IRI from prefixed name", ParseError::Kind::RelativeIri);
    return *iri;
  }

  Term blankNode() {
    get();
    get();
    std::string label;
    while (!atEnd() && (isNameChar(peek()))) label += get();
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
      --col_;
    }
    if (label.empty()) fail("empty blank node label");
    return BlankNode(normalizeLabel(label));
  }

  // Labels outside [A-Za-z0-9]+ are mapped to a hex spelling, stable within the document.
  static std::string normalizeLabel(const std::string& label) {
    if (std::all_of(label.begin(), label.end(), isAlnum)) return label;
    std::string out = "x";
    char buf[3];
    for (unsigned char c : label) {
      std::snprintf(buf, sizeof buf, "%02x", c);
      out += buf;
    }
    return out;
  }

  Term literal() {
    char quote = peek();
    bool longForm = turtle_ && peek(1) == quote && peek(2) == quote;
    std::string value;
    if (longForm) {
      get(), get(), get();
      for (;;) {
        if (atEnd()) fail("unterminated string");
        if (peek() == quote && peek(1) == quote && peek(2) == quote) {
          get(), get(), get();
          break;
        }
        char c = get();
        value += c == '\\' ? stringEscape() : std::string(1, c);
      }
    } else {
      get();
      for (;;) {
        if (atEnd()) fail("unterminated string");
        char c = get();
        if (c == quote) break;
        if (c == '\n' || c == '\r') fail("newline in string");
        value += c == '\\' ? stringEscape() : std::string(1, c);
      }
    }
    if (peek() == '@') {
      get();
      std::string lang;
      while (!atEnd() && (isAlnum(peek()) || peek() == '-')) lang += get();
      try {
        return Literal::withLanguage(std::move(value), std::move(lang));
      } catch (const InvalidTerm& e) {
        fail(e.what());
      }
    }
    if (peek() == '^' && peek(1) == '^') {
      get(), get();
      return Literal(std::move(value), iri());
    }
    return Literal(std::move(value));
  }

  std::string stringEscape() {
    if (atEnd()) fail("bad escape");
    char c = get();
    switch (c) {
      case 't': return "\t";
      case 'b': return "\b";
      case 'n': return "\n";
      case 'r': return "\r";
      case 'f': return "\f";
      case '"': return "\"";
      case '\'': return "'";
      case '\\': return "\\";
      case 'u': return hexCodepoint(4);
      case 'U': return hexCodepoint(8);
      default: fail(std::string("bad escape '\\") + c + "'");
    }
  }

  Term numeric() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') get();
    bool dot = false, exp = false;
    while (!atEnd()) {
      char c = peek();
      if (isDigit(c)) {
        get();
      } else if (c == '.' && !dot && !exp && isDigit(peek(1))) {
        dot = true;
        get();
      } else if ((c == 'e' || c == 'E') && !exp) {
        exp = true;
        get();
        if (peek() == '+' || peek() == '-') get();
      } else {
        break;
      }
    }
    std::string lex(in_.substr(start, pos_ - start));
    if (lex.empty() || lex == "+" || lex == "-") fail("malformed number");
    const char* dt = exp ? "http://www.w3.org/2001/XMLSchema#double"
                         : dot ? "http://www.w3.org/2001/XMLSchema#decimal"
                               : "http://www.w3.org/2001/XMLSchema#integer";
    return Literal(std::move(lex), Iri(dt));
  }

  Term boolean(std::string_view word) {
    for (std::size_t i = 0; i < word.size(); ++i) get();
    return Literal(std::string(word), Iri("http://www.w3.org/2001/XMLSchema#boolean"));
  }

  std::string_view in_;
  bool turtle_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::map<std::string, std::string> prefixes_;
  Graph graph_;
};

}  // namespace

Graph parse(std::string_view text, Format format) { return Reader(text, format).run(); }

// --- Turtle writer ---

std::string serializeTurtle(const Graph& g, const NamespaceTable& ns) {
  std::set<std::string> usedPrefixes;
  auto name = [&](const Iri& iri) {
    if (auto c = ns.compact(iri)) {
      usedPrefixes.insert(c->substr(0, c->find(':')));
      return *c;
    }
    return "<" + detail::escapeIri(iri.str()) + ">";
  };
  auto term = [&](const Term& t) -> std::string {
    if (const auto* iri = asIri(t)) return name(*iri);
    if (const auto* lit = asLiteral(t)) {
      std::string out = "\"" + detail::escapeString(lit->lexical()) + "\"";
      if (lit->language()) {
        out += "@" + *lit->language();
      } else if (lit->datatype()) {
        out += "^^" + name(*lit->datatype());
      }
      return out;
    }
    return "_:" + std::get<BlankNode>(t).label();
  };

  const Iri rdfType(term::kRdfType);
  std::string body;
  auto it = g.begin();
  while (it != g.end()) {
    const Term& subject = it->subject;
    auto end = it;
    while (end != g.end() && end->subject == subject) ++end;
    // rdf:type first, then the remaining predicates in order.
    std::vector<const Triple*> triples;
    for (auto t = it; t != end; ++t) {
      if (t->predicate == rdfType) triples.push_back(&*t);
    }
    for (auto t = it; t != end; ++t) {
      if (t->predicate != rdfType) triples.push_back(&*t);
    }
    body += term(subject);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const Triple& t = *triples[i];
      if (i == 0 || t.predicate != triples[i - 1]->predicate) {
        body += i == 0 ? " " : " ;\n    ";
        body += t.predicate == rdfType ? "a" : name(t.predicate);
        body += " ";
      } else {
        body += ", ";
      }
      body += term(t.object);
    }
    body += " .\n";
    it = end;
  }

  std::string out;
  for (const auto& prefix : usedPrefixes) {
    out += "@prefix " + prefix + ": <" + detail::escapeIri(*ns.lookup(prefix)) + "> .\n";
  }
  if (!out.empty() && !body.empty()) out += "\n";
  return out + body;
}

}  // namespace oac::rdf
