#include <json.hpp>

#include "oac/service.hpp"

namespace oac::service {

using Json = nlohmann::ordered_json;

namespace {

Json optionalDate(const std::optional<DateTime>& d) { return d ? Json(d->toIso()) : Json(nullptr); }

Json termJson(const rdf::Term& t) {
  if (const auto* iri = rdf::asIri(t)) return Json{{"iri", iri->str()}};
  if (const auto* lit = rdf::asLiteral(t)) {
    Json j{{"value", lit->lexical()}};
    if (lit->language()) j["lang"] = *lit->language();
    if (lit->datatype()) j["datatype"] = lit->datatype()->str();
    return j;
  }
  return Json{{"blank", std::get<rdf::BlankNode>(t).label()}};
}

Json rectJson(const Rect& r) { return Json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }

Json timeConstraintJson(const std::optional<TimeConstraint>& tc) {
  if (!tc) return nullptr;
  return Json{{"id", tc->id.str()}, {"when", tc->when.toIso()}};
}

Json constraintJson(const Constraint& c) {
  if (const auto* svg = std::get_if<SvgConstraint>(&c)) {
    Json j{{"type", "svg"}, {"id", svg->id.str()}, {"svg", svg->svgSource}};
    try {
      j["bbox"] = rectJson(boundingBox(parseSvgConstraint(svg->svgSource)));
    } catch (const SvgError&) {
      j["bbox"] = nullptr;
    }
    return j;
  }
  if (const auto* tc = std::get_if<TimeConstraint>(&c)) {
    return Json{{"type", "time"}, {"id", tc->id.str()}, {"when", tc->when.toIso()}};
  }
  const auto& g = std::get<GenericConstraint>(c);
  Json props = Json::object();
  for (const auto& [p, o] : g.properties) props[p.str()] = termJson(o);
  return Json{{"type", g.type.str()}, {"id", g.id.str()}, {"properties", props}};
}

Json targetJson(const Target& t) {
  Json j;
  if (const auto* ct = t.constrained()) {
    j = Json{{"kind", "constrained"}, {"id", ct->id.str()}, {"resource", ct->constrains.str()},
             {"constraint", constraintJson(ct->constraint)}};
  } else {
    const Iri& uri = std::get<DirectTarget>(t.content).uri;
    j = Json{{"kind", "direct"}, {"id", uri.str()}, {"resource", uri.str()}};
    if (auto hash = uri.str().find('#'); hash != std::string::npos) {
      try {
        auto f = parseMediaFragment(std::string_view(uri.str()).substr(hash + 1)).fragment;
        if (f.spatial) {
          j["region"] = rectJson({f.spatial->x, f.spatial->y, f.spatial->w, f.spatial->h});
          j["regionUnit"] = f.spatial->unit == SpatialUnit::Pixel ? "pixel" : "percent";
        }
      } catch (const FragmentError&) {
      }
    }
  }
  j["timeConstraint"] = timeConstraintJson(t.timeConstraint);
  return j;
}

Json resolutionJson(const Resolution& r) {
  return Json{{"original", r.original.str()},
              {"requested", optionalDate(r.requested)},
              {"chosen", r.chosen.str()},
              {"note", r.note ? Json("NotArchived") : Json(nullptr)}};
}

}  // namespace

std::string annotationJson(const Annotation& a) {
  Json body;
  if (const auto* in = a.body.inlineContent()) {
    body = Json{{"kind", "inline"}, {"id", in->id.str()}, {"chars", in->chars}, {"encoding", in->encoding}};
  } else {
    body = Json{{"kind", "external"}, {"id", a.body.id().str()}};
  }
  body["timeConstraint"] = timeConstraintJson(a.body.timeConstraint);

  Json targets = Json::array();
  for (const auto& t : a.targets) targets.push_back(targetJson(t));
  Json tags = Json::array();
  for (const auto& tag : a.semanticTags) {
    Json labels = Json::array();
    for (const auto& l : tag.labels) labels.push_back(Json{{"text", l.text}, {"lang", l.lang ? Json(*l.lang) : Json(nullptr)}});
    tags.push_back(Json{{"resource", tag.resource.str()}, {"labels", labels}});
  }
  std::string temporal;
  try {
    temporal = std::string(temporalClassName(classifyTemporal(a)));
  } catch (const ModelError&) {
    temporal = "Ambiguous";
  }
  Json j{{"uri", a.uri.str()},
         {"body", body},
         {"targets", targets},
         {"creator", a.creator ? Json(*a.creator) : Json(nullptr)},
         {"created", optionalDate(a.created)},
         {"when", optionalDate(a.when)},
         {"temporalClass", temporal},
         {"tags", tags}};
  return j.dump();
}

std::string harvestReportJson(const HarvestReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(Json{{"entry", f.entry.str()}, {"message", f.message}});
  return Json{{"ingested", r.ingested}, {"skipped", r.skipped}, {"failures", failures}}.dump();
}

std::string resolvedAnnotationJson(const ResolvedAnnotation& r) {
  Json targets = Json::array();
  for (const auto& t : r.targets) targets.push_back(resolutionJson(t));
  return Json{{"annotation", r.annotationUri.str()}, {"body", resolutionJson(r.body)}, {"targets", targets}}.dump();
}

std::string violationsJson(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) {
    arr.push_back(Json{{"code", std::string(toString(v.code))}, {"node", v.node}, {"message", v.message}});
  }
  return Json{{"violations", arr}}.dump();
}

}  // namespace oac::service
