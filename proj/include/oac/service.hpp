#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "oac/model.hpp"
#include "oac/store.hpp"
#include "oac/temporal.hpp"

namespace httplib {
class Server;
}

namespace oac::service {

// --- content negotiation ---

class NegotiationError : public std::runtime_error {
 public:
  enum class Kind { NotAcceptable, MalformedDatetime };
  NegotiationError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct NegotiationResult {
  rdf::Format format = rdf::Format::Turtle;
  std::string mediaType;
  std::optional<DateTime> datetime;
};

/// Highest q wins; text/turtle on ties and for wildcards. An empty Accept means `*/*`.
NegotiationResult negotiate(std::string_view accept, std::optional<std::string_view> acceptDatetime = std::nullopt);

// --- harvesting ---

/// One annotation document URI per line; blank lines and `#` comments are skipped.
struct FeedDocument {
  std::vector<Iri> entries;
  /// Throws std::invalid_argument naming the line of a bad entry.
  static FeedDocument parse(std::string_view text);
};

struct FetchResponse {
  int status = 0;
  std::string contentType;
  std::string body;
};

/// Transport-level failure: DNS, connection, timeout, unsupported scheme.
class FetchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Fetcher = std::function<FetchResponse(const Iri&)>;

/// Plain-HTTP GET with the given timeout in seconds.
Fetcher httpFetcher(int timeoutSeconds = 10);

struct HarvestFailure {
  Iri entry;
  std::string message;
};

struct HarvestReport {
  std::size_t ingested = 0;
  std::size_t skipped = 0;
  std::vector<HarvestFailure> failures;
};

class HarvestError : public std::runtime_error {
 public:
  enum class Kind { FeedUnreachable, MalformedFeed };
  HarvestError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// URN bindings shared between ingestion paths.
class EquivalenceRegistry {
 public:
  EquivalenceMap snapshot() const;
  /// All or nothing; throws EquivalenceError on a conflict.
  void merge(const EquivalenceMap& m);

 private:
  mutable std::shared_mutex mutex_;
  EquivalenceMap map_;
};

/// Rebuilds the registry from the owl:sameAs statements kept in stored graphs.
void loadEquivalences(EquivalenceRegistry& registry, const AnnotationStore& store);

class Harvester {
 public:
  Harvester(AnnotationStore& store, EquivalenceRegistry& equivalences, Fetcher fetcher);

  /// Fetches every entry and stores it with the feed as source. Per-entry problems
  /// land in the report; only an unreadable feed throws.
  HarvestReport harvest(const Iri& feedUri);

 private:
  std::mutex& feedLock(const Iri& feed);

  AnnotationStore& store_;
  EquivalenceRegistry& equivalences_;
  Fetcher fetcher_;
  std::mutex locksMutex_;
  std::map<Iri, std::unique_ptr<std::mutex>> feedLocks_;
};

// --- JSON views ---

/// Non-normative JSON projection for the web client.
std::string annotationJson(const Annotation& a);
std::string harvestReportJson(const HarvestReport& r);
std::string resolvedAnnotationJson(const ResolvedAnnotation& r);
std::string violationsJson(const std::vector<Violation>& vs);

// --- the HTTP service ---

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path dataDir = "oac-data";
  /// Public base for minted URIs; defaults to http://host:port once bound.
  std::string baseUrl;
  std::optional<std::filesystem::path> vocabularyFile;
  std::optional<std::filesystem::path> uiDir;
  /// Memento fixture file loaded at startup.
  std::optional<std::filesystem::path> registryFile;

  /// Reads the JSON config (if any), then applies OAC_LISTEN, OAC_DATA_DIR,
  /// OAC_BASE_URL and OAC_VOCABULARY.
  static ServiceConfig load(const std::optional<std::filesystem::path>& file);
  void setListen(std::string_view hostPort);
};

class Service {
 public:
  explicit Service(ServiceConfig config, Fetcher fetcher = httpFetcher());
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket; port 0 picks a free one. Returns the port.
  int bind();
  /// Blocks serving requests until stop().
  void listen();
  /// bind() + listen() on a background thread.
  int start();
  void stop();

  std::string baseUrl() const;
  AnnotationStore& store() { return *store_; }
  EquivalenceRegistry& equivalences() { return equivalences_; }
  Harvester& harvester() { return *harvester_; }

  void registerMemento(const Memento& m);
  TimeGateRegistry registry() const;

 private:
  void routes();
  void persistRegistryLocked() const;

  ServiceConfig config_;
  Vocabulary vocabulary_;
  std::unique_ptr<AnnotationStore> store_;
  EquivalenceRegistry equivalences_;
  std::unique_ptr<Harvester> harvester_;
  mutable std::shared_mutex registryMutex_;
  TimeGateRegistry registry_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace oac::service
