#include <algorithm>
#include <charconv>

#include "oac/service.hpp"

namespace oac::service {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct MediaRange {
  std::string type;
  std::string subtype;
  double q = 1;
};

std::optional<double> parseQ(std::string_view v) {
  double q = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), q);
  if (ec != std::errc() || end != v.data() + v.size() || q < 0 || q > 1) return std::nullopt;
  return q;
}

std::vector<MediaRange> parseAccept(std::string_view accept) {
  std::vector<MediaRange> out;
  while (!accept.empty()) {
    auto comma = accept.find(',');
    std::string_view item = trim(accept.substr(0, comma));
    accept = comma == std::string_view::npos ? std::string_view{} : accept.substr(comma + 1);
    if (item.empty()) continue;

    auto semi = item.find(';');
    std::string_view range = trim(item.substr(0, semi));
    auto slash = range.find('/');
    if (slash == std::string_view::npos) continue;
    MediaRange r;
    r.type.assign(range.substr(0, slash));
    r.subtype.assign(range.substr(slash + 1));
    for (auto& c : r.type) c = char(std::tolower(static_cast<unsigned char>(c)));
    for (auto& c : r.subtype) c = char(std::tolower(static_cast<unsigned char>(c)));

    bool valid = true;
    while (semi != std::string_view::npos) {
      item = item.substr(semi + 1);
      semi = item.find(';');
      std::string_view param = trim(item.substr(0, semi));
      if (param.size() > 2 && (param[0] == 'q' || param[0] == 'Q') && param[1] == '=') {
        auto q = parseQ(param.substr(2));
        if (!q) valid = false;
        else r.q = *q;
      }
    }
    if (valid) out.push_back(std::move(r));
  }
  return out;
}

/// q of the most specific range covering `type/subtype`, or nullopt.
std::optional<double> qualityOf(const std::vector<MediaRange>& ranges, std::string_view type,
                                std::string_view subtype) {
  int bestSpecificity = -1;
  double q = 0;
  for (const auto& r : ranges) {
    int specificity = -1;
    if (r.type == type && r.subtype == subtype) specificity = 2;
    else if (r.type == type && r.subtype == "*") specificity = 1;
    else if (r.type == "*" && r.subtype == "*") specificity = 0;
    if (specificity > bestSpecificity) {
      bestSpecificity = specificity;
      q = r.q;
    }
  }
  if (bestSpecificity < 0) return std::nullopt;
  return q;
}

}  // namespace

NegotiationResult negotiate(std::string_view accept, std::optional<std::string_view> acceptDatetime) {
  NegotiationResult result;
  if (acceptDatetime) {
    try {
      result.datetime = DateTime::parseHttpDate(*acceptDatetime);
    } catch (const DateTimeError& e) {
      throw NegotiationError(NegotiationError::Kind::MalformedDatetime, e.what());
    }
  }

  auto ranges = parseAccept(trim(accept).empty() ? std::string_view("*/*") : accept);
  // Candidates in preference order: the first wins ties.
  const std::pair<rdf::Format, std::pair<const char*, const char*>> candidates[] = {
      {rdf::Format::Turtle, {"text", "turtle"}},
      {rdf::Format::NTriples, {"application", "n-triples"}},
  };
  double best = 0;
  std::optional<rdf::Format> chosen;
  for (const auto& [format, type] : candidates) {
    auto q = qualityOf(ranges, type.first, type.second);
    if (q && *q > best) {
      best = *q;
      chosen = format;
    }
  }
  if (!chosen) {
    throw NegotiationError(NegotiationError::Kind::NotAcceptable,
                           "none of text/turtle, application/n-triples is acceptable");
  }
  result.format = *chosen;
  result.mediaType = std::string(rdf::mediaType(*chosen));
  return result;
}

}  // namespace oac::service
