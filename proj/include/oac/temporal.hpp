#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oac/model.hpp"

namespace oac {

/// An archived version of `original` as it was at `datetime`.
struct Memento {
  Iri original;
  Iri mementoUri;
  DateTime datetime;
  friend bool operator==(const Memento&, const Memento&) = default;
};

class TemporalError : public std::runtime_error {
 public:
  enum class Kind { DuplicateDatetime, UnknownOriginal, InvalidMemento, MalformedRegistry };
  TemporalError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Mementos per original resource, ascending by datetime.
class TimeGateRegistry {
 public:
  /// Inserts in datetime order. Throws DuplicateDatetime or InvalidMemento.
  void add(Memento m);

  /// Nearest memento to `at`; ties go to the earlier one. Throws UnknownOriginal.
  const Memento& select(const Iri& original, DateTime at) const;

  bool contains(const Iri& original) const { return byOriginal_.count(original) > 0; }
  const std::vector<Memento>& mementos(const Iri& original) const;
  std::optional<Memento> findByUri(const Iri& mementoUri) const;
  const std::map<Iri, std::vector<Memento>>& entries() const { return byOriginal_; }
  std::size_t size() const;

  /// One `original mementoUri datetime` line per memento, `#` comments allowed.
  static TimeGateRegistry parse(std::string_view text);
  std::string serialize() const;
  static TimeGateRegistry load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const TimeGateRegistry&, const TimeGateRegistry&) = default;

 private:
  std::map<Iri, std::vector<Memento>> byOriginal_;
};

TimeGateRegistry registerMemento(TimeGateRegistry r, Memento m);
Memento selectMemento(const TimeGateRegistry& r, const Iri& original, DateTime at);

enum class ResolutionNote { NotArchived };

struct Resolution {
  Iri original;
  std::optional<DateTime> requested;
  Iri chosen;
  std::optional<ResolutionNote> note;
  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct ResolvedAnnotation {
  Iri annotationUri;
  Resolution body;
  /// Same order as the annotation's targets.
  std::vector<Resolution> targets;
  friend bool operator==(const ResolvedAnnotation&, const ResolvedAnnotation&) = default;
};

/// Picks the time-appropriate version of the body and every target according to
/// the annotation's temporal class. Constrained targets resolve their base resource.
ResolvedAnnotation resolveAnnotation(const Annotation& a, const TimeGateRegistry& r);

}  // namespace oac
