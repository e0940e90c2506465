#pragma once

// A local HTTP server publishing fixture documents, standing in for annotators' sites.

#include <httplib.h>

#include <map>
#include <string>
#include <thread>

#include "support/fixtures.hpp"

namespace oac::testing {

class FixtureServer {
 public:
  FixtureServer() {
    server_.Get(R"(/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto it = documents_.find(req.matches[1]);
      if (it == documents_.end()) {
        res.status = 404;
        return;
      }
      res.set_content(it->second.second, it->second.first);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FixtureServer() {
    server_.stop();
    thread_.join();
  }

  /// Serves `content` at `/path`. Not thread-safe against running requests; publish first.
  void publish(const std::string& path, const std::string& contentType, const std::string& content) {
    documents_[path] = {contentType, content};
  }
  void publishFixture(const std::string& path, const std::string& fixture) {
    publish(path, fixture.size() > 3 && fixture.substr(fixture.size() - 3) == ".nt" ? "application/n-triples" : "text/turtle",
            readFixture(fixture));
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + "/" + path; }

 private:
  httplib::Server server_;
  std::map<std::string, std::pair<std::string, std::string>> documents_;
  std::thread thread_;
  int port_ = 0;
};

/// The three-entry feed plus a variant with one malformed entry.
inline void publishStandardFeeds(FixtureServer& s) {
  s.publishFixture("docs/cnn.ttl", "cnn_timeless.ttl");
  s.publishFixture("docs/cartoon.ttl", "cartoon_uniform.ttl");
  s.publishFixture("docs/map.ttl", "map_region.ttl");
  s.publishFixture("docs/broken.ttl", "feed/malformed.ttl");
  s.publishFixture("docs/urn.ttl", "feed/urn_annotation.ttl");
  s.publish("feeds/three.txt", "text/plain",
            "# three annotation documents\n" + s.url("docs/cnn.ttl") + "\n" + s.url("docs/cartoon.ttl") + "\n\n" +
                s.url("docs/map.ttl") + "\n");
  s.publish("feeds/with-broken.txt", "text/plain",
            s.url("docs/urn.ttl") + "\n" + s.url("docs/broken.ttl") + "\n" + s.url("docs/cnn.ttl") + "\n");
}

}  // namespace oac::testing
