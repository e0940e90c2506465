#pragma once

#include <filesystem>
#include <string>

#include "oac/rdf.hpp"

namespace oac {

namespace ns {
inline constexpr const char* kOac = "http://www.openannotation.org/ns/";
inline constexpr const char* kCnt = "http://www.w3.org/2008/content#";
inline constexpr const char* kDcterms = "http://purl.org/dc/terms/";
inline constexpr const char* kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr const char* kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr const char* kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr const char* kOwl = "http://www.w3.org/2002/07/owl#";
}  // namespace ns

// Terms from external vocabularies. These are fixed.
namespace term {
inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr const char* kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr const char* kXsdDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr const char* kOwlSameAs = "http://www.w3.org/2002/07/owl#sameAs";
inline constexpr const char* kCntChars = "http://www.w3.org/2008/content#chars";
inline constexpr const char* kCntCharacterEncoding =
    "http://www.w3.org/2008/content#characterEncoding";
inline constexpr const char* kCntContentAsText = "http://www.w3.org/2008/content#ContentAsText";
inline constexpr const char* kDctermsCreator = "http://purl.org/dc/terms/creator";
inline constexpr const char* kDctermsCreated = "http://purl.org/dc/terms/created";
inline constexpr const char* kDctermsReferences = "http://purl.org/dc/terms/references";
}  // namespace term

/// The OAC classes and properties this implementation reads and writes.
///
/// Every OAC term used by the model mapping goes through this table, so the
/// wire names can be re-pointed from a single JSON file:
///
///   { "hasBody": "http://example.org/ns/body", ... }
///
/// Keys are the member names below; omitted keys keep their default.
struct Vocabulary {
  rdf::Iri annotation;
  rdf::Iri body;
  rdf::Iri target;
  rdf::Iri constraintTarget;
  rdf::Iri constraint;
  rdf::Iri svgConstraint;
  rdf::Iri timeConstraint;
  rdf::Iri hasBody;
  rdf::Iri hasTarget;
  rdf::Iri constrains;
  rdf::Iri constrainedBy;
  rdf::Iri when;

  static const Vocabulary& standard();
  static Vocabulary fromJsonFile(const std::filesystem::path& path);
  static Vocabulary fromJson(std::string_view json);
};

}  // namespace oac
