#pragma once

#include <stdexcept>
#include <string>

namespace covert {

/// Base for every error raised by the library. `kind()` is the stable,
/// machine-readable tag written into CLI error documents.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define COVERT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

COVERT_DEFINE_ERROR(ParseError)
COVERT_DEFINE_ERROR(ValidationError)
COVERT_DEFINE_ERROR(ReachabilityError)
COVERT_DEFINE_ERROR(DegenerateGeometry)
COVERT_DEFINE_ERROR(DomainError)
COVERT_DEFINE_ERROR(BracketError)
COVERT_DEFINE_ERROR(StatModelError)
COVERT_DEFINE_ERROR(ShapeError)
COVERT_DEFINE_ERROR(BackendError)
COVERT_DEFINE_ERROR(LinearizationError)
COVERT_DEFINE_ERROR(ModeError)
COVERT_DEFINE_ERROR(SingularCovariance)
COVERT_DEFINE_ERROR(IoError)

#undef COVERT_DEFINE_ERROR

}  // namespace covert
