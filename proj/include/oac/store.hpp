#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "oac/model.hpp"
#include "oac/segments.hpp"

namespace oac {

struct StoreRecord {
  Annotation annotation;
  rdf::Graph rawGraph;
  DateTime ingestedAt;
  /// The feed the record was last harvested from.
  std::optional<Iri> sourceUri;
};

/// Criteria combine conjunctively. `region` needs `targetUri`.
struct SearchQuery {
  std::optional<Iri> targetUri;
  std::optional<DateTime> createdFrom;
  std::optional<DateTime> createdTo;
  std::optional<std::string> text;
  std::optional<Rect> region;

  bool empty() const {
    return !targetUri && !createdFrom && !createdTo && !text && !region;
  }
};

class StoreError : public std::runtime_error {
 public:
  enum class Kind { ValidationFailed, NotFound, EmptyQuery, InvalidQuery, Storage };
  StoreError(Kind kind, const std::string& message, std::vector<Violation> violations = {})
      : std::runtime_error(message), kind_(kind), violations_(std::move(violations)) {}
  Kind kind() const { return kind_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  Kind kind_;
  std::vector<Violation> violations_;
};

enum class PutStatus { Inserted, Replaced, Unchanged };

struct PutResult {
  StoreRecord record;
  PutStatus status;
};

struct ThreadNode {
  Iri uri;
  std::vector<ThreadNode> replies;
  friend bool operator==(const ThreadNode&, const ThreadNode&) = default;
};

/// Annotation store with target, creation-date, text and region search.
///
/// With a data directory, each record lives in `annotations/<key>.nt` (canonical
/// N-Triples of the raw graph) next to `annotations/<key>.json` (uri, ingestedAt,
/// sourceUri). `index/*.tsv` are derived and rebuilt from those files by reindex().
///
/// Readers share a lock and always see fully indexed records; writers are serialized.
class AnnotationStore {
 public:
  /// In-memory store.
  explicit AnnotationStore(const Vocabulary& vocabulary = Vocabulary::standard());
  /// Persistent store; loads every record under `dataDir`.
  explicit AnnotationStore(std::filesystem::path dataDir,
                           const Vocabulary& vocabulary = Vocabulary::standard());
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Same URI and identical canonical graph: Unchanged (the source is still updated).
  /// Throws StoreError(ValidationFailed) with the violations.
  PutResult put(const Annotation& a, const rdf::Graph& raw,
                std::optional<Iri> sourceUri = std::nullopt);

  /// Throws StoreError(NotFound).
  StoreRecord get(const Iri& uri) const;
  std::optional<StoreRecord> find(const Iri& uri) const;

  /// Sorted by created ascending (undated first), then URI.
  std::vector<Iri> search(const SearchQuery& q) const;

  /// Replies are annotations targeting their parent; each annotation appears once.
  ThreadNode thread(const Iri& root) const;

  std::size_t size() const;
  std::vector<Iri> uris() const;

  /// Reloads every record from disk, rebuilds the indexes and rewrites `index/`.
  std::size_t reindex();
  /// Writes `index/` if it is stale.
  void flushIndex();

  void setClock(std::function<DateTime()> clock) { clock_ = std::move(clock); }

  const std::optional<std::filesystem::path>& dataDir() const { return dir_; }

 private:
  struct Entry {
    std::shared_ptr<const StoreRecord> record;
    std::vector<std::string> targetKeys;
    std::vector<std::pair<std::string, Rect>> regions;
    std::string foldedText;
  };

  void indexLocked(const Iri& uri, std::shared_ptr<const StoreRecord> record);
  void unindexLocked(const Iri& uri);
  bool matches(const Entry& e, const SearchQuery& q) const;
  void writeRecordFiles(const StoreRecord& r) const;
  void loadAllLocked();
  void writeIndexFilesLocked();

  Vocabulary vocabulary_;
  std::optional<std::filesystem::path> dir_;
  std::function<DateTime()> clock_;

  mutable std::shared_mutex mutex_;
  std::map<Iri, Entry> entries_;
  std::map<std::string, std::set<Iri>> byTarget_;
  std::map<std::optional<DateTime>, std::set<Iri>> byCreated_;
  bool indexDirty_ = false;
};

/// File-name key for an annotation URI.
std::string recordKey(const Iri& uri);

/// Lower-cases ASCII letters.
std::string foldCase(std::string_view s);

}  // namespace oac
