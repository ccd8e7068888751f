#pragma once

#include <stdexcept>
#include <string>

namespace momentsep {

/// A moment needed by an operation is absent from the sequence's support.
class IncompleteTmsError : public std::runtime_error {
 public:
  explicit IncompleteTmsError(const std::string& what) : std::runtime_error(what) {}
};

/// Input data is internally inconsistent (e.g. colliding symmetric entries
/// that disagree, or contradictory equality constraints).
class IntegrityError : public std::runtime_error {
 public:
  explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

/// Atom extraction from a flat moment matrix failed (defective eigenstructure
/// or pivot search breakdown). The hierarchy treats this as a soft failure.
class ExtractionError : public std::runtime_error {
 public:
  explicit ExtractionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace momentsep
