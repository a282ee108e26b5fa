#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plike {

enum class ErrorKind {
  PoleHit,
  NonFinite,
  DegenerateParabolic,
  NoCycleFound,
  NotInPetal,
  NoConvergence,
  NotEscaped,
  BranchAmbiguity,
  RayBroken,
  NewtonDiverged,
  PeriodCollapsed,
  ContinuationStalled,
  AmbiguousCenterMatch,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Domain error raised by every library operation. The kind is stable and
/// is what the CLI reports in its machine-readable error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace plike
