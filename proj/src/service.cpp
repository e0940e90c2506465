#include "oac/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <json.hpp>
#include <sstream>

namespace oac::service {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// --- config ---

void ServiceConfig::setListen(std::string_view hostPort) {
  auto colon = hostPort.rfind(':');
  std::string_view portText = colon == std::string_view::npos ? hostPort : hostPort.substr(colon + 1);
  if (colon != std::string_view::npos && colon > 0) host = std::string(hostPort.substr(0, colon));
  int p = 0;
  auto [end, ec] = std::from_chars(portText.data(), portText.data() + portText.size(), p);
  if (ec != std::errc() || end != portText.data() + portText.size() || p < 0 || p > 65535) {
    throw std::invalid_argument("listen address '" + std::string(hostPort) + "' needs a port, e.g. 127.0.0.1:8080");
  }
  port = p;
}

ServiceConfig ServiceConfig::load(const std::optional<fs::path>& file) {
  ServiceConfig c;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw std::invalid_argument("cannot read config file " + file->string());
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument("config " + file->string() + ": " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config " + file->string() + " must be a JSON object");
    const fs::path base = file->parent_path();
    auto path = [&](const Json& v) { return base / fs::path(v.get<std::string>()); };
    for (const auto& [key, value] : j.items()) {
      if (!value.is_string()) throw std::invalid_argument("config key '" + key + "' must be a string");
      if (key == "listen") c.setListen(value.get<std::string>());
      else if (key == "data_dir") c.dataDir = path(value);
      else if (key == "base_url") c.baseUrl = value.get<std::string>();
      else if (key == "vocabulary") c.vocabularyFile = path(value);
      else if (key == "ui_dir") c.uiDir = path(value);
      else if (key == "registry_file") c.registryFile = path(value);
      else throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (const char* v = std::getenv("OAC_LISTEN")) c.setListen(v);
  if (const char* v = std::getenv("OAC_DATA_DIR")) c.dataDir = v;
  if (const char* v = std::getenv("OAC_BASE_URL")) c.baseUrl = v;
  if (const char* v = std::getenv("OAC_VOCABULARY")) c.vocabularyFile = fs::path(v);
  return c;
}

// --- helpers ---

namespace {

std::string errorJson(std::string_view message) { return Json{{"error", message}}.dump(); }

void sendError(httplib::Response& res, int status, std::string_view message) {
  res.status = status;
  res.set_content(errorJson(message), "application/json");
}

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const fs::path& p, const std::string& content) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

/// The local part of a minted URI: the UUID of `urn:uuid:` names, else a hash.
std::string mintId(const Iri& urn) {
  constexpr std::string_view kUuid = "urn:uuid:";
  const std::string& s = urn.str();
  if (s.size() > kUuid.size() && s.compare(0, kUuid.size(), kUuid) == 0) {
    std::string id = s.substr(kUuid.size());
    bool safe = std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c) || c == '-'; });
    if (safe) return id;
  }
  return recordKey(urn);
}

std::string compactDate(DateTime d) {
  std::string iso = d.toIso();
  std::string out;
  for (char c : iso) {
    if (std::isdigit(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

std::optional<Rect> parseRegion(std::string_view s) {
  double v[4];
  for (int i = 0; i < 4; ++i) {
    auto comma = s.find(',');
    std::string_view part = s.substr(0, comma);
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (ec != std::errc() || end != part.data() + part.size()) return std::nullopt;
    if ((comma == std::string_view::npos) != (i == 3)) return std::nullopt;
    if (comma != std::string_view::npos) s = s.substr(comma + 1);
  }
  if (v[2] < 0 || v[3] < 0) return std::nullopt;
  return Rect{v[0], v[1], v[2], v[3]};
}

}  // namespace

// --- service ---

Service::Service(ServiceConfig config, Fetcher fetcher)
    : config_(std::move(config)),
      vocabulary_(config_.vocabularyFile ? Vocabulary::fromJsonFile(*config_.vocabularyFile) : Vocabulary::standard()),
      store_(std::make_unique<AnnotationStore>(config_.dataDir, vocabulary_)),
      harvester_(std::make_unique<Harvester>(*store_, equivalences_, std::move(fetcher))),
      server_(std::make_unique<httplib::Server>()) {
  loadEquivalences(equivalences_, *store_);
  fs::create_directories(config_.dataDir / "mementos");
  if (fs::exists(config_.dataDir / "mementos" / "registry.txt")) {
    registry_ = TimeGateRegistry::load(config_.dataDir / "mementos" / "registry.txt");
  }
  if (config_.registryFile) {
    for (const auto& [original, ms] : TimeGateRegistry::load(*config_.registryFile).entries()) {
      for (const auto& m : ms) {
        if (registry_.findByUri(m.mementoUri) == m) continue;
        registry_.add(m);
      }
    }
    persistRegistryLocked();
  }
  routes();
}

Service::~Service() { stop(); }

std::string Service::baseUrl() const {
  std::string base = config_.baseUrl;
  if (base.empty()) base = "http://" + config_.host + ":" + std::to_string(port_);
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base;
}

int Service::bind() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.host);
    if (port_ < 0) throw std::runtime_error("cannot bind " + config_.host);
  } else {
    if (!server_->bind_to_port(config_.host, config_.port)) {
      throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    }
    port_ = config_.port;
  }
  return port_;
}

void Service::listen() { server_->listen_after_bind(); }

int Service::start() {
  int port = bind();
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
  return port;
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void Service::registerMemento(const Memento& m) {
  std::unique_lock lock(registryMutex_);
  registry_.add(m);
  persistRegistryLocked();
}

TimeGateRegistry Service::registry() const {
  std::shared_lock lock(registryMutex_);
  return registry_;
}

void Service::persistRegistryLocked() const {
  writeFile(config_.dataDir / "mementos" / "registry.txt", registry_.serialize());
}

void Service::routes() {
  auto& svr = *server_;

  svr.Post("/annotations", [this](const httplib::Request& req, httplib::Response& res) {
    auto format = rdf::formatFromMediaType(req.get_header_value("Content-Type"));
    if (!format) return sendError(res, 415, "Content-Type must be text/turtle or application/n-triples");
    rdf::Graph g;
    try {
      g = rdf::parse(req.body, *format);
    } catch (const rdf::ParseError& e) {
      return sendError(res, 400, e.what());
    }
    auto found = findAnnotations(g, vocabulary_);
    if (found.size() != 1) return sendError(res, 422, "document must describe exactly one annotation");
    const Iri original = found.front();

    EquivalenceMap added;
    EquivalenceMap combined;
    try {
      added = equivalencesFromGraph(g);
      combined = equivalences_.snapshot();
      for (const auto& [urn, http] : added.bindings()) combined = registerEquivalence(combined, urn, http);
      auto mint = [&](const Iri& node, const char* collection) {
        if (!node.isUrn() || combined.lookup(node)) return;
        Iri http(baseUrl() + "/" + collection + "/" + mintId(node));
        added = registerEquivalence(added, node, http);
        combined = registerEquivalence(combined, node, http);
      };
      mint(original, "annotations");
      auto bodies = g.objects(original, vocabulary_.hasBody);
      if (bodies.size() == 1) {
        if (const auto* body = rdf::asIri(bodies.front())) mint(*body, "bodies");
      }
    } catch (const EquivalenceError& e) {
      return sendError(res, 409, e.what());
    }

    rdf::Graph rewritten = rewriteGraph(g, combined);
    for (const auto& [urn, http] : added.bindings()) rewritten.insert(rdf::Triple(urn, Iri(term::kOwlSameAs), http));
    const Iri uri = combined.lookup(original).value_or(original);

    PutStatus status;
    try {
      Annotation a = annotationFromGraph(rewritten, uri, vocabulary_);
      status = store_->put(a, rewritten).status;
      equivalences_.merge(added);
    } catch (const ModelError& e) {
      res.status = 422;
      return res.set_content(violationsJson({e.violation()}), "application/json");
    } catch (const StoreError& e) {
      res.status = e.kind() == StoreError::Kind::ValidationFailed ? 422 : 500;
      return res.set_content(violationsJson(e.violations()), "application/json");
    } catch (const EquivalenceError& e) {
      return sendError(res, 409, e.what());
    }

    NegotiationResult n;
    try {
      n = negotiate(req.get_header_value("Accept"));
    } catch (const NegotiationError&) {
      n = negotiate("text/turtle");
    }
    res.status = status == PutStatus::Inserted ? 201 : 200;
    res.set_header("Location", uri.str());
    res.set_content(rdf::serialize(rewritten, n.format), n.mediaType);
  });

  // httplib matches against the decoded path; identifiers need the raw, still-encoded form.
  auto rawTail = [](const httplib::Request& req, std::string_view prefix) {
    std::string_view target = req.target;
    target = target.substr(0, target.find('?'));
    return std::string(target.substr(std::min(target.size(), prefix.size())));
  };

  auto lookup = [this](const std::string& id) -> std::optional<StoreRecord> {
    if (auto iri = Iri::tryParse(baseUrl() + "/annotations/" + id)) {
      if (auto r = store_->find(*iri)) return r;
    }
    if (auto iri = Iri::tryParse(percentDecode(id))) return store_->find(*iri);
    return std::nullopt;
  };

  svr.Get(R"(/annotations/(.+))", [this, lookup, rawTail](const httplib::Request& req, httplib::Response& res) {
    std::string id = rawTail(req, "/annotations/");
    bool json = id.size() > 5 && id.compare(id.size() - 5, 5, ".json") == 0;
    auto record = lookup(id);
    if (!record && json) {
      record = lookup(id.substr(0, id.size() - 5));
    } else {
      json = false;
    }
    if (!record) return sendError(res, 404, "no such annotation");
    if (json) return res.set_content(annotationJson(record->annotation), "application/json");
    NegotiationResult n;
    try {
      n = negotiate(req.get_header_value("Accept"));
    } catch (const NegotiationError&) {
      res.status = 406;
      return res.set_content("406 Not Acceptable: available as text/turtle or application/n-triples\n", "text/plain");
    }
    std::set<Iri> withMementos;
    {
      std::shared_lock lock(registryMutex_);
      for (const auto& t : record->annotation.targets) {
        if (registry_.contains(t.resource())) withMementos.insert(t.resource());
      }
    }
    std::string links;
    for (const auto& original : withMementos) {
      if (!links.empty()) links += ", ";
      links += "<" + baseUrl() + "/timegate/" + percentEncode(original.str()) + ">; rel=\"timegate\"; anchor=\"" +
               original.str() + "\"";
    }
    if (!links.empty()) res.set_header("Link", links);
    res.set_header("Vary", "accept");
    res.set_content(rdf::serialize(record->rawGraph, n.format), n.mediaType);
  });

  svr.Get(R"(/bodies/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    Iri uri(baseUrl() + "/bodies/" + std::string(req.matches[1]));
    for (const auto& a : store_->uris()) {
      auto r = store_->find(a);
      if (!r || r->annotation.body.id() != uri) continue;
      if (const auto* in = r->annotation.body.inlineContent()) {
        return res.set_content(in->chars, "text/plain; charset=" + in->encoding);
      }
    }
    sendError(res, 404, "no such body");
  });

  svr.Get("/search", [this](const httplib::Request& req, httplib::Response& res) {
    SearchQuery q;
    try {
      if (req.has_param("target")) {
        auto iri = Iri::tryParse(req.get_param_value("target"));
        if (!iri) return sendError(res, 400, "target must be an absolute IRI");
        q.targetUri = *iri;
      }
      if (req.has_param("from")) q.createdFrom = DateTime::parseIso(req.get_param_value("from"));
      if (req.has_param("to")) q.createdTo = DateTime::parseIso(req.get_param_value("to"));
      if (req.has_param("q")) q.text = req.get_param_value("q");
      if (req.has_param("region")) {
        q.region = parseRegion(req.get_param_value("region"));
        if (!q.region) return sendError(res, 400, "region must be x,y,w,h");
      }
      Json out = Json::array();
      for (const auto& uri : store_->search(q)) out.push_back(uri.str());
      res.set_content(out.dump(), "application/json");
    } catch (const DateTimeError& e) {
      sendError(res, 400, e.what());
    } catch (const StoreError& e) {
      sendError(res, 400, e.what());
    }
  });

  svr.Post("/harvest", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<Iri> feed;
    try {
      auto j = Json::parse(req.body);
      if (j.is_object() && j.contains("feed") && j["feed"].is_string()) feed = Iri::tryParse(j["feed"].get<std::string>());
    } catch (const Json::exception&) {
    }
    if (!feed) return sendError(res, 400, "body must be {\"feed\": \"<absolute URI>\"}");
    try {
      res.set_content(harvestReportJson(harvester_->harvest(*feed)), "application/json");
    } catch (const HarvestError& e) {
      sendError(res, e.kind() == HarvestError::Kind::FeedUnreachable ? 502 : 422, e.what());
    }
  });

  svr.Get(R"(/timegate/(.+))", [this, rawTail](const httplib::Request& req, httplib::Response& res) {
    auto original = Iri::tryParse(percentDecode(rawTail(req, "/timegate/")));
    res.set_header("Vary", "accept-datetime");
    if (!original) return sendError(res, 400, "the TimeGate path must hold a percent-encoded absolute URI");
    res.set_header("Link", "<" + original->str() + ">; rel=\"original\"");
    std::optional<DateTime> at;
    if (req.has_header("Accept-Datetime")) {
      try {
        at = negotiate("*/*", req.get_header_value("Accept-Datetime")).datetime;
      } catch (const NegotiationError& e) {
        return sendError(res, 400, e.what());
      }
    }
    std::shared_lock lock(registryMutex_);
    if (!registry_.contains(*original)) return sendError(res, 404, "no mementos for " + original->str());
    const Memento& m = at ? registry_.select(*original, *at) : registry_.mementos(*original).back();
    res.status = 302;
    res.set_header("Location", m.mementoUri.str());
  });

  svr.Get(R"(/mementos/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    std::optional<Memento> m;
    if (auto uri = Iri::tryParse(baseUrl() + "/mementos/" + id)) {
      std::shared_lock lock(registryMutex_);
      m = registry_.findByUri(*uri);
    }
    if (!m) return sendError(res, 404, "no such memento");
    const fs::path dir = config_.dataDir / "mementos";
    std::string type = fs::exists(dir / (id + ".type")) ? readFile(dir / (id + ".type")) : "text/plain";
    res.set_header("Memento-Datetime", m->datetime.toHttpDate());
    res.set_header("Link", "<" + m->original.str() + ">; rel=\"original\", <" + baseUrl() + "/timegate/" +
                               percentEncode(m->original.str()) + ">; rel=\"timegate\"");
    res.set_content(fs::exists(dir / (id + ".body")) ? readFile(dir / (id + ".body")) : std::string(), type);
  });

  svr.Post("/mementos", [this](const httplib::Request& req, httplib::Response& res) {
    Json j;
    try {
      j = Json::parse(req.body);
    } catch (const Json::exception& e) {
      return sendError(res, 400, e.what());
    }
    auto field = [&](const char* key) -> std::optional<std::string> {
      if (!j.is_object() || !j.contains(key) || !j[key].is_string()) return std::nullopt;
      return j[key].get<std::string>();
    };
    auto original = field("original") ? Iri::tryParse(*field("original")) : std::nullopt;
    auto at = field("datetime") ? DateTime::tryParseIso(*field("datetime")) : std::nullopt;
    if (!original || !at) {
      return sendError(res, 400, "body needs \"original\" (absolute URI) and \"datetime\" (YYYY-MM-DDThh:mm:ssZ)");
    }
    const std::string prefix = baseUrl() + "/mementos/";
    std::string id = recordKey(*original) + "-" + compactDate(*at);
    std::optional<Iri> mementoUri = Iri::tryParse(prefix + id);
    if (auto given = field("mementoUri")) {
      mementoUri = Iri::tryParse(*given);
      if (!mementoUri) return sendError(res, 400, "mementoUri must be an absolute URI");
      id = mementoUri->str().rfind(prefix, 0) == 0 ? mementoUri->str().substr(prefix.size()) : std::string();
    }
    Memento m{*original, *mementoUri, *at};
    try {
      std::unique_lock lock(registryMutex_);
      registry_.add(m);
      if (!id.empty()) {
        const fs::path dir = config_.dataDir / "mementos";
        writeFile(dir / (id + ".body"), field("content").value_or(""));
        writeFile(dir / (id + ".type"), field("contentType").value_or("text/plain"));
      }
      persistRegistryLocked();
    } catch (const TemporalError& e) {
      return sendError(res, 409, e.what());
    }
    res.status = 201;
    res.set_header("Location", m.mementoUri.str());
    res.set_content(Json{{"original", m.original.str()}, {"mementoUri", m.mementoUri.str()},
                         {"datetime", m.datetime.toIso()}}
                        .dump(),
                    "application/json");
  });

  if (config_.uiDir) {
    svr.set_mount_point("/ui", config_.uiDir->string());
  } else {
    svr.Get("/ui", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "<!doctype html><title>OAC annotations</title><p>The web client is not bundled with this server. "
          "Set <code>ui_dir</code> in the config to serve it here.</p>",
          "text/html");
    });
  }

  svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
    Json endpoints = Json::array({"POST /annotations", "GET /annotations/{id}", "GET /annotations/{id}.json",
                                  "GET /search", "POST /harvest", "GET /timegate/{original}", "GET /mementos/{id}",
                                  "POST /mementos", "GET /ui"});
    res.set_content(Json{{"endpoints", endpoints}}.dump(), "application/json");
  });

  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      sendError(res, 500, e.what());
    } catch (...) {
      sendError(res, 500, "internal error");
    }
  });
}

}  // namespace oac::service
