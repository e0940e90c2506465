#include <httplib.h>

#include "oac/service.hpp"

namespace oac::service {

FeedDocument FeedDocument::parse(std::string_view text) {
  FeedDocument feed;
  std::size_t lineNo = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineNo;
    if (auto hash = line.find('#'); hash == 0 || (hash != std::string_view::npos && line[hash - 1] == ' ')) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty()) continue;
    auto iri = Iri::tryParse(line);
    if (!iri || !iri->isDereferenceable()) {
      throw std::invalid_argument("feed line " + std::to_string(lineNo) + ": '" + std::string(line) +
                                  "' is not an http(s) URI");
    }
    feed.entries.push_back(*iri);
  }
  return feed;
}

Fetcher httpFetcher(int timeoutSeconds) {
  return [timeoutSeconds](const Iri& uri) {
    const std::string& s = uri.str();
    if (uri.scheme() != "http") throw FetchError("unsupported scheme in " + s + " (plain http only)");
    auto authorityStart = s.find("//");
    if (authorityStart == std::string::npos) throw FetchError("no authority in " + s);
    auto pathStart = s.find_first_of("/?#", authorityStart + 2);
    std::string origin = s.substr(0, pathStart);
    std::string path = pathStart == std::string::npos ? "/" : s.substr(pathStart);
    if (auto hash = path.find('#'); hash != std::string::npos) path.erase(hash);
    if (path.empty() || path[0] != '/') path.insert(0, "/");

    httplib::Client client(origin);
    client.set_connection_timeout(timeoutSeconds, 0);
    client.set_read_timeout(timeoutSeconds, 0);
    client.set_follow_location(true);
    auto res = client.Get(path, {{"Accept", "text/turtle, application/n-triples;q=0.9, */*;q=0.1"}});
    if (!res) throw FetchError("GET " + s + " failed: " + httplib::to_string(res.error()));
    return FetchResponse{res->status, res->get_header_value("Content-Type"), res->body};
  };
}

EquivalenceMap EquivalenceRegistry::snapshot() const {
  std::shared_lock lock(mutex_);
  return map_;
}

void EquivalenceRegistry::merge(const EquivalenceMap& m) {
  std::unique_lock lock(mutex_);
  EquivalenceMap next = map_;
  for (const auto& [urn, http] : m.bindings()) next = registerEquivalence(std::move(next), urn, http);
  map_ = std::move(next);
}

void loadEquivalences(EquivalenceRegistry& registry, const AnnotationStore& store) {
  for (const auto& uri : store.uris()) {
    if (auto r = store.find(uri)) registry.merge(equivalencesFromGraph(r->rawGraph));
  }
}

Harvester::Harvester(AnnotationStore& store, EquivalenceRegistry& equivalences, Fetcher fetcher)
    : store_(store), equivalences_(equivalences), fetcher_(std::move(fetcher)) {}

std::mutex& Harvester::feedLock(const Iri& feed) {
  std::lock_guard guard(locksMutex_);
  auto& slot = feedLocks_[feed];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

namespace {

rdf::Format entryFormat(const FetchResponse& res, const Iri& entry) {
  if (!res.contentType.empty()) {
    if (auto f = rdf::formatFromMediaType(res.contentType)) return *f;
  }
  if (auto f = rdf::formatFromPath(entry.str())) return *f;
  throw std::runtime_error("unsupported content type '" + res.contentType + "'");
}

}  // namespace

HarvestReport Harvester::harvest(const Iri& feedUri) {
  std::lock_guard feedGuard(feedLock(feedUri));

  FetchResponse feedResponse;
  try {
    feedResponse = fetcher_(feedUri);
  } catch (const std::exception& e) {
    throw HarvestError(HarvestError::Kind::FeedUnreachable, e.what());
  }
  if (feedResponse.status != 200) {
    throw HarvestError(HarvestError::Kind::FeedUnreachable,
                       "feed " + feedUri.str() + " returned HTTP " + std::to_string(feedResponse.status));
  }
  FeedDocument feed;
  try {
    feed = FeedDocument::parse(feedResponse.body);
  } catch (const std::invalid_argument& e) {
    throw HarvestError(HarvestError::Kind::MalformedFeed, e.what());
  }

  HarvestReport report;
  for (const auto& entry : feed.entries) {
    try {
      FetchResponse res = fetcher_(entry);
      if (res.status != 200) throw std::runtime_error("HTTP " + std::to_string(res.status));
      rdf::Graph g = rdf::parse(res.body, entryFormat(res, entry));

      auto found = findAnnotations(g);
      if (found.empty()) throw std::runtime_error("document contains no annotation");
      if (found.size() > 1) throw std::runtime_error("document contains more than one annotation");

      EquivalenceMap documentMap = equivalencesFromGraph(g);
      EquivalenceMap combined = equivalences_.snapshot();
      for (const auto& [urn, http] : documentMap.bindings()) combined = registerEquivalence(combined, urn, http);

      rdf::Graph rewritten = rewriteGraph(g, combined);
      Iri uri = combined.lookup(found.front()).value_or(found.front());
      Annotation a = annotationFromGraph(rewritten, uri);
      PutResult put = store_.put(a, rewritten, feedUri);
      equivalences_.merge(documentMap);
      if (put.status == PutStatus::Unchanged) ++report.skipped;
      else ++report.ingested;
    } catch (const std::exception& e) {
      report.failures.push_back({entry, e.what()});
    }
  }
  return report;
}

}  // namespace oac::service
