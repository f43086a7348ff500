#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sherd {

// Base of every domain error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI's JSON error output and the service.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define SHERD_DEFINE_ERROR(Name)                                               \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name, what) {}             \
  };

SHERD_DEFINE_ERROR(ValidationError)
SHERD_DEFINE_ERROR(IoError)
SHERD_DEFINE_ERROR(SpecError)
SHERD_DEFINE_ERROR(DegenerateGeometry)
SHERD_DEFINE_ERROR(NoOverlap)
SHERD_DEFINE_ERROR(StepMismatch)
SHERD_DEFINE_ERROR(NoFeasibleOffset)
SHERD_DEFINE_ERROR(EmptyInput)
SHERD_DEFINE_ERROR(UnknownSherd)
SHERD_DEFINE_ERROR(NotACandidate)
SHERD_DEFINE_ERROR(NothingToUndo)

#undef SHERD_DEFINE_ERROR

// Malformed input file. `location` is a 1-based line number for text formats
// and a byte offset for binary PLY payloads.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t location)
      : Error("ParseError", what + " (at " + std::to_string(location) + ")"),
        location_(location) {}
  std::size_t location() const noexcept { return location_; }

private:
  std::size_t location_;
};

// An interior station of a profile had no opposite-surface hit.
class GapError : public Error {
public:
  GapError(const std::string& what, std::size_t station)
      : Error("GapError", what), station_(station) {}
  std::size_t station() const noexcept { return station_; }

private:
  std::size_t station_;
};

} // namespace sherd
