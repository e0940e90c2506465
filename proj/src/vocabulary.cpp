#include "oac/vocabulary.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oac {

namespace {
rdf::Iri oacTerm(const char* local) { return rdf::Iri(std::string(ns::kOac) + local); }
}  // namespace

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary v{
      oacTerm("Annotation"),    oacTerm("Body"),           oacTerm("Target"),
      oacTerm("ConstraintTarget"), oacTerm("Constraint"),  oacTerm("SvgConstraint"),
      oacTerm("TimeConstraint"), oacTerm("hasBody"),       oacTerm("hasTarget"),
      oacTerm("constrains"),    oacTerm("constrainedBy"),  oacTerm("when"),
  };
  return v;
}

Vocabulary Vocabulary::fromJson(std::string_view text) {
  auto doc = nlohmann::json::parse(text);
  if (!doc.is_object()) throw std::invalid_argument("vocabulary table must be a JSON object");
  Vocabulary v = standard();
  const std::pair<const char*, rdf::Iri Vocabulary::*> fields[] = {
      {"annotation", &Vocabulary::annotation},
      {"body", &Vocabulary::body},
      {"target", &Vocabulary::target},
      {"constraintTarget", &Vocabulary::constraintTarget},
      {"constraint", &Vocabulary::constraint},
      {"svgConstraint", &Vocabulary::svgConstraint},
      {"timeConstraint", &Vocabulary::timeConstraint},
      {"hasBody", &Vocabulary::hasBody},
      {"hasTarget", &Vocabulary::hasTarget},
      {"constrains", &Vocabulary::constrains},
      {"constrainedBy", &Vocabulary::constrainedBy},
      {"when", &Vocabulary::when},
  };
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const auto& [name, member] : fields) {
      if (key == name) {
        v.*member = rdf::Iri(value.get<std::string>());
        known = true;
      }
    }
    if (!known) throw std::invalid_argument("unknown vocabulary key '" + key + "'");
  }
  return v;
}

Vocabulary Vocabulary::fromJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read vocabulary table " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fromJson(ss.str());
}

}  // namespace oac
