#include "oac/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace oac {

namespace fs = std::filesystem;
using SE = StoreError::Kind;

std::string recordKey(const Iri& uri) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a
  for (unsigned char c : uri.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string foldCase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

namespace {

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw StoreError(SE::Storage, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFileAtomically(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError(SE::Storage, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw StoreError(SE::Storage, "write failed for " + tmp.string());
  }
  fs::rename(tmp, p);
}

// A direct target like `http://img#xywh=1,2,3,4` also addresses `http://img`.
std::optional<std::pair<std::string, std::optional<Rect>>> fragmentTarget(const Iri& uri) {
  const auto& s = uri.str();
  auto hash = s.find('#');
  if (hash == std::string::npos) return std::nullopt;
  std::optional<Rect> region;
  try {
    auto f = parseMediaFragment(std::string_view(s).substr(hash + 1)).fragment;
    if (f.spatial && f.spatial->unit == SpatialUnit::Pixel) {
      region = Rect{f.spatial->x, f.spatial->y, f.spatial->w, f.spatial->h};
    }
  } catch (const FragmentError&) {
    // Not a media fragment; the base URI is still a match key.
  }
  return std::pair{s.substr(0, hash), region};
}

}  // namespace

AnnotationStore::AnnotationStore(const Vocabulary& vocabulary)
    : vocabulary_(vocabulary), clock_(&DateTime::now) {}

AnnotationStore::AnnotationStore(fs::path dataDir, const Vocabulary& vocabulary)
    : vocabulary_(vocabulary), dir_(std::move(dataDir)), clock_(&DateTime::now) {
  fs::create_directories(*dir_ / "annotations");
  fs::create_directories(*dir_ / "index");
  std::unique_lock lock(mutex_);
  loadAllLocked();
  writeIndexFilesLocked();
}

AnnotationStore::~AnnotationStore() {
  try {
    flushIndex();
  } catch (...) {
    // Index files are derived; a failed flush is repaired by the next open.
  }
}

void AnnotationStore::indexLocked(const Iri& uri, std::shared_ptr<const StoreRecord> record) {
  Entry e;
  const Annotation& a = record->annotation;
  for (const auto& t : a.targets) {
    e.targetKeys.push_back(t.resource().str());
    if (const auto* ct = t.constrained()) {
      if (const auto* svg = std::get_if<SvgConstraint>(&ct->constraint)) {
        try {
          e.regions.emplace_back(ct->constrains.str(), boundingBox(parseSvgConstraint(svg->svgSource)));
        } catch (const SvgError&) {
        }
      }
    } else if (auto frag = fragmentTarget(t.resource())) {
      e.targetKeys.push_back(frag->first);
      if (frag->second) e.regions.emplace_back(frag->first, *frag->second);
    }
  }
  std::sort(e.targetKeys.begin(), e.targetKeys.end());
  e.targetKeys.erase(std::unique(e.targetKeys.begin(), e.targetKeys.end()), e.targetKeys.end());
  if (const auto* in = a.body.inlineContent()) e.foldedText = foldCase(in->chars);
  e.record = std::move(record);

  for (const auto& k : e.targetKeys) byTarget_[k].insert(uri);
  byCreated_[a.created].insert(uri);
  entries_[uri] = std::move(e);
  indexDirty_ = true;
}

void AnnotationStore::unindexLocked(const Iri& uri) {
  auto it = entries_.find(uri);
  if (it == entries_.end()) return;
  for (const auto& k : it->second.targetKeys) {
    auto t = byTarget_.find(k);
    t->second.erase(uri);
    if (t->second.empty()) byTarget_.erase(t);
  }
  auto c = byCreated_.find(it->second.record->annotation.created);
  c->second.erase(uri);
  if (c->second.empty()) byCreated_.erase(c);
  entries_.erase(it);
  indexDirty_ = true;
}

PutResult AnnotationStore::put(const Annotation& a, const rdf::Graph& raw, std::optional<Iri> sourceUri) {
  auto violations = validate(a);
  if (violations.empty()) violations = validateGraph(raw, a.uri, vocabulary_);
  if (violations.empty() && !(annotationFromGraph(raw, a.uri, vocabulary_) == a)) {
    violations.push_back({ViolationCode::MalformedProperty, a.uri.str(),
                          "raw graph does not describe the given annotation"});
  }
  if (!violations.empty()) {
    std::string msg = "annotation " + a.uri.str() + " failed validation:";
    for (const auto& v : violations) msg += " " + std::string(toString(v.code));
    throw StoreError(SE::ValidationFailed, msg, std::move(violations));
  }
  const std::string canonical = rdf::serialize(raw, rdf::Format::NTriples);

  std::unique_lock lock(mutex_);
  PutStatus status = PutStatus::Inserted;
  if (auto it = entries_.find(a.uri); it != entries_.end()) {
    const auto& existing = *it->second.record;
    if (rdf::serialize(existing.rawGraph, rdf::Format::NTriples) == canonical) {
      if (!sourceUri || existing.sourceUri == sourceUri) return {existing, PutStatus::Unchanged};
      auto updated = std::make_shared<StoreRecord>(existing);
      updated->sourceUri = std::move(sourceUri);
      writeRecordFiles(*updated);
      it->second.record = updated;
      return {*updated, PutStatus::Unchanged};
    }
    status = PutStatus::Replaced;
  }
  auto record = std::make_shared<StoreRecord>(StoreRecord{a, raw, clock_(), std::move(sourceUri)});
  writeRecordFiles(*record);
  unindexLocked(a.uri);
  indexLocked(a.uri, record);
  return {*record, status};
}

StoreRecord AnnotationStore::get(const Iri& uri) const {
  if (auto r = find(uri)) return *r;
  throw StoreError(SE::NotFound, "no annotation " + uri.str());
}

std::optional<StoreRecord> AnnotationStore::find(const Iri& uri) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(uri);
  if (it == entries_.end()) return std::nullopt;
  return *it->second.record;
}

bool AnnotationStore::matches(const Entry& e, const SearchQuery& q) const {
  const Annotation& a = e.record->annotation;
  if (q.targetUri && !std::binary_search(e.targetKeys.begin(), e.targetKeys.end(), q.targetUri->str())) {
    return false;
  }
  if (q.createdFrom || q.createdTo) {
    if (!a.created) return false;
    if (q.createdFrom && *a.created < *q.createdFrom) return false;
    if (q.createdTo && *a.created > *q.createdTo) return false;
  }
  if (q.text && e.foldedText.find(foldCase(*q.text)) == std::string::npos) return false;
  if (q.region) {
    bool hit = std::any_of(e.regions.begin(), e.regions.end(), [&](const auto& r) {
      return r.first == q.targetUri->str() && intersects(r.second, *q.region);
    });
    if (!hit) return false;
  }
  return true;
}

std::vector<Iri> AnnotationStore::search(const SearchQuery& q) const {
  if (q.empty()) throw StoreError(SE::EmptyQuery, "search query has no criteria");
  if (q.region && !q.targetUri) throw StoreError(SE::InvalidQuery, "region search requires a target URI");

  std::shared_lock lock(mutex_);
  std::vector<std::pair<std::optional<DateTime>, Iri>> hits;
  auto consider = [&](const Iri& uri) {
    const Entry& e = entries_.at(uri);
    if (matches(e, q)) hits.emplace_back(e.record->annotation.created, uri);
  };
  if (q.targetUri) {
    auto it = byTarget_.find(q.targetUri->str());
    if (it != byTarget_.end()) {
      for (const auto& uri : it->second) consider(uri);
    }
  } else if (q.createdFrom || q.createdTo) {
    auto lo = q.createdFrom ? byCreated_.lower_bound(q.createdFrom) : byCreated_.begin();
    for (auto it = lo; it != byCreated_.end(); ++it) {
      if (!it->first) continue;
      if (q.createdTo && *it->first > *q.createdTo) break;
      for (const auto& uri : it->second) consider(uri);
    }
  } else {
    for (const auto& [uri, _] : entries_) consider(uri);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<Iri> out;
  out.reserve(hits.size());
  for (auto& h : hits) out.push_back(std::move(h.second));
  return out;
}

ThreadNode AnnotationStore::thread(const Iri& root) const {
  std::shared_lock lock(mutex_);
  if (!entries_.count(root)) throw StoreError(SE::NotFound, "no annotation " + root.str());
  std::set<Iri> visited;
  std::function<ThreadNode(const Iri&)> walk = [&](const Iri& uri) {
    visited.insert(uri);
    ThreadNode node{uri, {}};
    auto it = byTarget_.find(uri.str());
    if (it == byTarget_.end()) return node;
    std::vector<std::pair<std::optional<DateTime>, Iri>> children;
    for (const auto& child : it->second) {
      children.emplace_back(entries_.at(child).record->annotation.created, child);
    }
    std::sort(children.begin(), children.end());
    for (const auto& [_, child] : children) {
      if (!visited.count(child)) node.replies.push_back(walk(child));
    }
    return node;
  };
  return walk(root);
}

std::size_t AnnotationStore::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<Iri> AnnotationStore::uris() const {
  std::shared_lock lock(mutex_);
  std::vector<Iri> out;
  for (const auto& [uri, _] : entries_) out.push_back(uri);
  return out;
}

// --- persistence ---

void AnnotationStore::writeRecordFiles(const StoreRecord& r) const {
  if (!dir_) return;
  const fs::path base = *dir_ / "annotations" / recordKey(r.annotation.uri);
  fs::path meta = base;
  meta += ".json";
  if (fs::exists(meta)) {
    auto existing = nlohmann::json::parse(readFile(meta));
    if (existing.value("uri", "") != r.annotation.uri.str()) {
      throw StoreError(SE::Storage, "record key collision for " + r.annotation.uri.str());
    }
  }
  nlohmann::json j = {{"uri", r.annotation.uri.str()}, {"ingestedAt", r.ingestedAt.toIso()}};
  j["sourceUri"] = r.sourceUri ? nlohmann::json(r.sourceUri->str()) : nlohmann::json(nullptr);
  fs::path nt = base;
  nt += ".nt";
  writeFileAtomically(nt, rdf::serialize(r.rawGraph, rdf::Format::NTriples));
  writeFileAtomically(meta, j.dump(2) + "\n");
}

void AnnotationStore::loadAllLocked() {
  entries_.clear();
  byTarget_.clear();
  byCreated_.clear();
  std::vector<fs::path> metas;
  for (const auto& f : fs::directory_iterator(*dir_ / "annotations")) {
    if (f.path().extension() == ".json") metas.push_back(f.path());
  }
  std::sort(metas.begin(), metas.end());
  for (const auto& meta : metas) {
    auto j = nlohmann::json::parse(readFile(meta));
    fs::path nt = meta;
    nt.replace_extension(".nt");
    Iri uri(j.at("uri").get<std::string>());
    rdf::Graph raw = rdf::parse(readFile(nt), rdf::Format::NTriples);
    auto record = std::make_shared<StoreRecord>(StoreRecord{
        annotationFromGraph(raw, uri, vocabulary_), std::move(raw),
        DateTime::parseIso(j.at("ingestedAt").get<std::string>()), std::nullopt});
    if (j.contains("sourceUri") && j["sourceUri"].is_string()) {
      record->sourceUri = Iri(j["sourceUri"].get<std::string>());
    }
    indexLocked(uri, std::move(record));
  }
  indexDirty_ = true;
}

void AnnotationStore::writeIndexFilesLocked() {
  if (!dir_ || !indexDirty_) return;
  std::string targets, created, regions;
  for (const auto& [key, uris] : byTarget_) {
    for (const auto& uri : uris) targets += key + "\t" + uri.str() + "\n";
  }
  for (const auto& [when, uris] : byCreated_) {
    for (const auto& uri : uris) created += (when ? when->toIso() : std::string("-")) + "\t" + uri.str() + "\n";
  }
  for (const auto& [uri, e] : entries_) {
    for (const auto& [target, r] : e.regions) {
      regions += target + "\t" + uri.str() + "\t" + formatNumber(r.x) + "," + formatNumber(r.y) + "," +
                 formatNumber(r.w) + "," + formatNumber(r.h) + "\n";
    }
  }
  writeFileAtomically(*dir_ / "index" / "targets.tsv", targets);
  writeFileAtomically(*dir_ / "index" / "created.tsv", created);
  writeFileAtomically(*dir_ / "index" / "regions.tsv", regions);
  indexDirty_ = false;
}

std::size_t AnnotationStore::reindex() {
  std::unique_lock lock(mutex_);
  if (dir_) {
    loadAllLocked();
  } else {
    std::vector<std::pair<Iri, std::shared_ptr<const StoreRecord>>> records;
    for (const auto& [uri, e] : entries_) records.emplace_back(uri, e.record);
    entries_.clear();
    byTarget_.clear();
    byCreated_.clear();
    for (auto& [uri, r] : records) indexLocked(uri, std::move(r));
  }
  indexDirty_ = true;
  writeIndexFilesLocked();
  return entries_.size();
}

void AnnotationStore::flushIndex() {
  std::unique_lock lock(mutex_);
  writeIndexFilesLocked();
}

}  // namespace oac
