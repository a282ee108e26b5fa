#include "plike/error.hpp"

namespace plike {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DegenerateParabolic: return "DegenerateParabolic";
    case ErrorKind::NoCycleFound: return "NoCycleFound";
    case ErrorKind::NotInPetal: return "NotInPetal";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotEscaped: return "NotEscaped";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::RayBroken: return "RayBroken";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::PeriodCollapsed: return "PeriodCollapsed";
    case ErrorKind::ContinuationStalled: return "ContinuationStalled";
    case ErrorKind::AmbiguousCenterMatch: return "AmbiguousCenterMatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace plike
