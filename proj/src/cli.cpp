#include "oac/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "oac/segments.hpp"
#include "oac/service.hpp"
#include "oac/temporal.hpp"

namespace oac::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

/// A failure already explained to the user; maps to exit status 1.
struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readInput(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainFailure("cannot read " + path);
  ss << in.rdbuf();
  return ss.str();
}

rdf::Format pickFormat(const std::string& flag, const std::string& path) {
  if (flag == "ntriples" || flag == "nt") return rdf::Format::NTriples;
  if (flag == "turtle" || flag == "ttl") return rdf::Format::Turtle;
  return rdf::formatFromPath(path).value_or(rdf::Format::Turtle);
}

rdf::Graph loadGraph(const std::string& path, const std::string& formatFlag) {
  try {
    return rdf::parse(readInput(path), pickFormat(formatFlag, path));
  } catch (const rdf::ParseError& e) {
    throw DomainFailure(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
  }
}

Iri singleAnnotation(const rdf::Graph& g, const std::string& uriFlag, const std::string& path) {
  if (!uriFlag.empty()) {
    auto iri = Iri::tryParse(uriFlag);
    if (!iri) throw DomainFailure("--uri must be an absolute IRI");
    return *iri;
  }
  auto found = findAnnotations(g);
  if (found.empty()) throw DomainFailure(path + ": no oac:Annotation found");
  if (found.size() > 1) throw DomainFailure(path + ": several annotations; choose one with --uri");
  return found.front();
}

Json fragmentJson(const FragmentParse& p) {
  const MediaFragment& f = p.fragment;
  Json j = Json::object();
  j["temporal"] = f.temporal ? Json{{"start", f.temporal->start},
                                    {"end", f.temporal->end ? Json(*f.temporal->end) : Json(nullptr)}}
                             : Json(nullptr);
  j["spatial"] = f.spatial ? Json{{"unit", f.spatial->unit == SpatialUnit::Pixel ? "pixel" : "percent"},
                                  {"x", f.spatial->x},
                                  {"y", f.spatial->y},
                                  {"w", f.spatial->w},
                                  {"h", f.spatial->h}}
                           : Json(nullptr);
  j["track"] = f.track ? Json(*f.track) : Json(nullptr);
  j["id"] = f.id ? Json(*f.id) : Json(nullptr);
  j["ptr"] = f.ptr ? Json(f.ptr->str()) : Json(nullptr);
  j["warnings"] = p.warnings;
  return j;
}

const char* shapeName(const SvgShape& s) {
  static constexpr const char* kNames[] = {"rect", "circle", "ellipse", "polygon", "path"};
  return kNames[s.index()];
}

std::optional<fs::path> configPath(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("OAC_CONFIG")) return fs::path(env);
  return std::nullopt;
}

struct Remote {
  std::string origin;
  std::string prefix;
};

Remote splitServiceUrl(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw DomainFailure("--service must be an http URL");
  auto path = url.find('/', scheme + 3);
  Remote r{url.substr(0, path), path == std::string::npos ? "" : url.substr(path)};
  while (!r.prefix.empty() && r.prefix.back() == '/') r.prefix.pop_back();
  return r;
}

std::string remoteCall(const std::string& serviceUrl, const std::string& method, const std::string& path,
                       const std::string& body = {}) {
  Remote r = splitServiceUrl(serviceUrl);
  httplib::Client client(r.origin);
  client.set_read_timeout(120, 0);
  auto res = method == "POST" ? client.Post(r.prefix + path, body, "application/json") : client.Get(r.prefix + path);
  if (!res) throw DomainFailure(method + " " + serviceUrl + path + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw DomainFailure("service answered " + std::to_string(res->status) + ": " + res->body);
  return res->body;
}

int serve(service::ServiceConfig config, std::ostream& err) {
  // Block termination signals before threads start so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::Service svc(config);
  int port = svc.start();
  err << "oac: serving on " << config.host << ":" << port << " (base " << svc.baseUrl() << ", data "
      << config.dataDir.string() << ")" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  err << "oac: shutting down" << std::endl;
  svc.stop();
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"OAC annotation tools: validate, convert and query annotation graphs, or run the annotation service."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "oac 1.0.0");

  std::string file, format, uri, toFormat, output, fragment, svg, registryFile, config, listen, dataDir, baseUrl,
      serviceUrl, feed, target, from, to, text, region;
  bool quiet = false;

  auto* validateCmd = app.add_subcommand("validate", "Check annotation graphs; prints violations as JSON");
  validateCmd->add_option("file", file, "RDF document (.ttl, .nt or - for stdin)")->required();
  validateCmd->add_option("--format", format, "ntriples or turtle (default: from extension)");
  validateCmd->add_option("--uri", uri, "Annotation to check (default: every annotation)");

  auto* convertCmd = app.add_subcommand("convert", "Transcode between N-Triples and Turtle");
  convertCmd->add_option("file", file, "Input document")->required();
  convertCmd->add_option("--from", format, "Input format");
  convertCmd->add_option("--to", toFormat, "Output format (default: the other one)");
  convertCmd->add_option("-o,--output", output, "Write here instead of stdout");

  auto* fragCmd = app.add_subcommand("frag", "Parse a media fragment to JSON");
  fragCmd->add_option("fragment", fragment, "Fragment text, with or without '#'")->required();

  auto* bboxCmd = app.add_subcommand("svg-bbox", "Bounding box of an SVG constraint");
  bboxCmd->add_option("svg", svg, "SVG element text, or @file")->required();

  auto* classifyCmd = app.add_subcommand("classify", "Print Timeless, Uniform or Varied");
  classifyCmd->add_option("file", file, "RDF document")->required();
  classifyCmd->add_option("--format", format, "ntriples or turtle");
  classifyCmd->add_option("--uri", uri, "Annotation to classify");

  auto* resolveCmd = app.add_subcommand("resolve", "Resolve body and targets against a memento registry");
  resolveCmd->add_option("file", file, "RDF document")->required();
  resolveCmd->add_option("--registry", registryFile, "Registry file (original memento datetime per line)")->required();
  resolveCmd->add_option("--format", format, "ntriples or turtle");
  resolveCmd->add_option("--uri", uri, "Annotation to resolve");

  auto* serveCmd = app.add_subcommand("serve", "Run the HTTP annotation service");
  serveCmd->add_option("--listen", listen, "host:port (default 127.0.0.1:8080)");
  serveCmd->add_option("--base-url", baseUrl, "Public base URL for minted URIs");
  serveCmd->add_option("--registry", registryFile, "Memento registry file to load");

  auto* harvestCmd = app.add_subcommand("harvest", "Harvest a feed into the store");
  harvestCmd->add_option("feed", feed, "Feed URI")->required();

  auto* searchCmd = app.add_subcommand("search", "Search stored annotations");
  searchCmd->add_option("--target", target, "Target URI");
  searchCmd->add_option("--from", from, "Created on or after (YYYY-MM-DDThh:mm:ssZ)");
  searchCmd->add_option("--to", to, "Created on or before");
  searchCmd->add_option("--q", text, "Case-insensitive body text");
  searchCmd->add_option("--region", region, "x,y,w,h (needs --target)");

  auto* reindexCmd = app.add_subcommand("reindex", "Rebuild the store's index files");

  for (auto* cmd : {serveCmd, harvestCmd, searchCmd, reindexCmd}) {
    cmd->add_option("--config", config, "Config file (or OAC_CONFIG)");
    cmd->add_option("--data-dir", dataDir, "Store directory");
  }
  for (auto* cmd : {harvestCmd, searchCmd}) {
    cmd->add_option("--service", serviceUrl, "Use a running service instead of a local store");
  }
  validateCmd->add_flag("-q,--quiet", quiet, "Exit status only");

  // CLI11 consumes arguments from the back.
  std::vector<std::string> reversed;
  if (args.size() > 1) reversed.assign(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "oac: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "run '" << (sub == &app ? std::string("oac") : "oac " + sub->get_name()) << " --help' for usage\n";
    return kUsage;
  }

  auto loadConfig = [&] {
    auto c = service::ServiceConfig::load(configPath(config));
    if (!dataDir.empty()) c.dataDir = dataDir;
    return c;
  };

  try {
    if (*validateCmd) {
      rdf::Graph g = loadGraph(file, format);
      std::vector<Iri> uris;
      if (!uri.empty()) uris.push_back(singleAnnotation(g, uri, file));
      else uris = findAnnotations(g);
      std::vector<Violation> violations;
      if (uris.empty()) {
        violations.push_back({ViolationCode::NotAnAnnotation, file, "no resource is typed oac:Annotation"});
      }
      for (const auto& u : uris) {
        auto vs = validateGraph(g, u);
        violations.insert(violations.end(), vs.begin(), vs.end());
      }
      if (violations.empty()) return kSuccess;
      if (!quiet) out << service::violationsJson(violations) << "\n";
      return kFailure;
    }

    if (*convertCmd) {
      rdf::Format in = pickFormat(format, file);
      rdf::Graph g = loadGraph(file, format);
      rdf::Format target = toFormat.empty()
                               ? (in == rdf::Format::Turtle ? rdf::Format::NTriples : rdf::Format::Turtle)
                               : pickFormat(toFormat, "");
      if (!toFormat.empty() && toFormat != "ntriples" && toFormat != "nt" && toFormat != "turtle" && toFormat != "ttl") {
        err << "oac: --to must be ntriples or turtle\n";
        return kUsage;
      }
      std::string text = rdf::serialize(g, target);
      if (output.empty()) {
        out << text;
      } else {
        std::ofstream f(output, std::ios::binary);
        if (!(f << text)) throw DomainFailure("cannot write " + output);
      }
      return kSuccess;
    }

    if (*fragCmd) {
      try {
        out << fragmentJson(parseMediaFragment(fragment)).dump() << "\n";
      } catch (const FragmentError& e) {
        throw DomainFailure(e.what());
      }
      return kSuccess;
    }

    if (*bboxCmd) {
      std::string source = svg.size() > 1 && svg[0] == '@' ? readInput(svg.substr(1)) : svg;
      try {
        SvgShape shape = parseSvgConstraint(source);
        Rect r = boundingBox(shape);
        out << Json{{"shape", shapeName(shape)}, {"bbox", {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}}}.dump()
            << "\n";
      } catch (const SvgError& e) {
        throw DomainFailure(e.what());
      }
      return kSuccess;
    }

    if (*classifyCmd) {
      rdf::Graph g = loadGraph(file, format);
      Annotation a = annotationFromGraph(g, singleAnnotation(g, uri, file));
      out << temporalClassName(classifyTemporal(a)) << "\n";
      return kSuccess;
    }

    if (*resolveCmd) {
      rdf::Graph g = loadGraph(file, format);
      Annotation a = annotationFromGraph(g, singleAnnotation(g, uri, file));
      auto violations = validate(a);
      if (!violations.empty()) {
        out << service::violationsJson(violations) << "\n";
        return kFailure;
      }
      TimeGateRegistry reg = TimeGateRegistry::parse(readInput(registryFile));
      out << service::resolvedAnnotationJson(resolveAnnotation(a, reg)) << "\n";
      return kSuccess;
    }

    if (*serveCmd) {
      auto c = loadConfig();
      if (!listen.empty()) c.setListen(listen);
      if (!baseUrl.empty()) c.baseUrl = baseUrl;
      if (!registryFile.empty()) c.registryFile = fs::path(registryFile);
      return serve(c, err);
    }

    if (*harvestCmd) {
      auto feedIri = Iri::tryParse(feed);
      if (!feedIri) {
        err << "oac: feed must be an absolute URI\n";
        return kUsage;
      }
      std::string report;
      if (!serviceUrl.empty()) {
        report = remoteCall(serviceUrl, "POST", "/harvest", Json{{"feed", feed}}.dump());
      } else {
        auto c = loadConfig();
        AnnotationStore store(c.dataDir);
        service::EquivalenceRegistry eq;
        service::loadEquivalences(eq, store);
        service::Harvester h(store, eq, service::httpFetcher());
        try {
          report = service::harvestReportJson(h.harvest(*feedIri));
        } catch (const service::HarvestError& e) {
          throw DomainFailure(e.what());
        }
      }
      out << report << "\n";
      auto parsed = Json::parse(report);
      return parsed["failures"].empty() ? kSuccess : kFailure;
    }

    if (*searchCmd) {
      SearchQuery q;
      if (!target.empty()) {
        q.targetUri = Iri::tryParse(target);
        if (!q.targetUri) throw DomainFailure("--target must be an absolute IRI");
      }
      if (!from.empty()) q.createdFrom = DateTime::parseIso(from);
      if (!to.empty()) q.createdTo = DateTime::parseIso(to);
      if (!text.empty()) q.text = text;
      if (!region.empty()) {
        std::vector<double> v;
        std::stringstream ss(region);
        for (std::string part; std::getline(ss, part, ',');) v.push_back(std::stod(part));
        if (v.size() != 4) throw DomainFailure("--region must be x,y,w,h");
        q.region = Rect{v[0], v[1], v[2], v[3]};
      }
      if (q.empty()) {
        err << "oac: search needs at least one of --target, --from, --to, --q, --region\n";
        return kUsage;
      }
      if (!serviceUrl.empty()) {
        httplib::Params params;
        if (q.targetUri) params.emplace("target", target);
        if (q.createdFrom) params.emplace("from", from);
        if (q.createdTo) params.emplace("to", to);
        if (q.text) params.emplace("q", text);
        if (q.region) params.emplace("region", region);
        out << remoteCall(serviceUrl, "GET", "/search?" + httplib::detail::params_to_query_str(params)) << "\n";
        return kSuccess;
      }
      auto c = loadConfig();
      AnnotationStore store(c.dataDir);
      Json results = Json::array();
      for (const auto& u : store.search(q)) results.push_back(u.str());
      out << results.dump() << "\n";
      return kSuccess;
    }

    if (*reindexCmd) {
      auto c = loadConfig();
      AnnotationStore store(c.dataDir);
      out << Json{{"records", store.reindex()}, {"dataDir", c.dataDir.string()}}.dump() << "\n";
      return kSuccess;
    }
  } catch (const DomainFailure& e) {
    err << "oac: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "oac: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace oac::cli
