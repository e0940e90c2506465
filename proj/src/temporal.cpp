#include "oac/temporal.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace oac {

using TK = TemporalError::Kind;

void TimeGateRegistry::add(Memento m) {
  if (m.mementoUri == m.original) {
    throw TemporalError(TK::InvalidMemento, "memento URI equals the original " + m.original.str());
  }
  auto& list = byOriginal_[m.original];
  auto pos = std::lower_bound(list.begin(), list.end(), m.datetime,
                              [](const Memento& x, DateTime t) { return x.datetime < t; });
  if (pos != list.end() && pos->datetime == m.datetime) {
    throw TemporalError(TK::DuplicateDatetime, m.original.str() + " already has a memento at " +
                                                   m.datetime.toIso());
  }
  list.insert(pos, std::move(m));
}

const std::vector<Memento>& TimeGateRegistry::mementos(const Iri& original) const {
  auto it = byOriginal_.find(original);
  if (it == byOriginal_.end()) throw TemporalError(TK::UnknownOriginal, "no mementos for " + original.str());
  return it->second;
}

const Memento& TimeGateRegistry::select(const Iri& original, DateTime at) const {
  const auto& list = mementos(original);
  auto after = std::lower_bound(list.begin(), list.end(), at,
                                [](const Memento& x, DateTime t) { return x.datetime < t; });
  if (after == list.begin()) return *after;
  auto before = std::prev(after);
  if (after == list.end()) return *before;
  // Ties favour the earlier memento.
  auto dBefore = at.unixSeconds() - before->datetime.unixSeconds();
  auto dAfter = after->datetime.unixSeconds() - at.unixSeconds();
  return dAfter < dBefore ? *after : *before;
}

std::optional<Memento> TimeGateRegistry::findByUri(const Iri& uri) const {
  for (const auto& [_, list] : byOriginal_) {
    for (const auto& m : list) {
      if (m.mementoUri == uri) return m;
    }
  }
  return std::nullopt;
}

std::size_t TimeGateRegistry::size() const {
  std::size_t n = 0;
  for (const auto& [_, list] : byOriginal_) n += list.size();
  return n;
}

TimeGateRegistry TimeGateRegistry::parse(std::string_view text) {
  TimeGateRegistry r;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string original, memento, datetime, extra;
    if (!(fields >> original)) continue;
    auto fail = [&](const std::string& why) {
      throw TemporalError(TK::MalformedRegistry, "line " + std::to_string(lineNo) + ": " + why);
    };
    if (!(fields >> memento >> datetime) || (fields >> extra)) fail("expected 'original mementoUri datetime'");
    auto o = rdf::Iri::tryParse(original);
    auto m = rdf::Iri::tryParse(memento);
    auto dt = DateTime::tryParseIso(datetime);
    if (!o || !m || !dt) fail("invalid IRI or datetime");
    r.add(Memento{*o, *m, *dt});
  }
  return r;
}

std::string TimeGateRegistry::serialize() const {
  std::string out;
  for (const auto& [original, list] : byOriginal_) {
    for (const auto& m : list) {
      out += original.str() + " " + m.mementoUri.str() + " " + m.datetime.toIso() + "\n";
    }
  }
  return out;
}

TimeGateRegistry TimeGateRegistry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read registry " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void TimeGateRegistry::save(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write registry " + path.string());
    out << serialize();
  }
  std::filesystem::rename(tmp, path);
}

TimeGateRegistry registerMemento(TimeGateRegistry r, Memento m) {
  r.add(std::move(m));
  return r;
}

Memento selectMemento(const TimeGateRegistry& r, const Iri& original, DateTime at) {
  return r.select(original, at);
}

namespace {

Resolution resolveAt(const Iri& original, std::optional<DateTime> at, const TimeGateRegistry& r) {
  Resolution res{original, at, original, std::nullopt};
  if (!at) return res;
  if (!r.contains(original)) {
    res.note = ResolutionNote::NotArchived;
    return res;
  }
  res.chosen = r.select(original, *at).mementoUri;
  return res;
}

}  // namespace

ResolvedAnnotation resolveAnnotation(const Annotation& a, const TimeGateRegistry& r) {
  TemporalClass cls = classifyTemporal(a);
  auto timeFor = [&](const std::optional<TimeConstraint>& tc) -> std::optional<DateTime> {
    if (std::holds_alternative<Timeless>(cls)) return std::nullopt;
    if (const auto* u = std::get_if<Uniform>(&cls)) return u->when;
    if (tc) return tc->when;
    return a.created;
  };
  ResolvedAnnotation out{a.uri, resolveAt(a.body.id(), timeFor(a.body.timeConstraint), r), {}};
  for (const auto& t : a.targets) out.targets.push_back(resolveAt(t.resource(), timeFor(t.timeConstraint), r));
  return out;
}

}  // namespace oac
