#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plike/complex.hpp"
#include "plike/tolerance.hpp"

namespace plike {

/// Parameter planes carrying a designated free critical point:
///   CubicA   C_a with c_-(a)
///   PerOneA  P_A with -1
enum class Plane { CubicA, PerOneA };

const char* to_string(Plane plane);

struct CenterRecord {
  Plane plane = Plane::CubicA;
  Cx param;
  int period = 0;
  double residual = 0.0;  // |f^p(c) - c| at param
};

struct ChiRecord {
  Cx a;
  int period = 0;
  Cx rho_p;
  Cx A_matched;
  Cx B;
  double match_residual = 0.0;  // |rho_q(A_matched) - rho_p|
  int path_steps = 0;
  Cx a_center;  // center of a's component
  Cx A_center;  // matched center in the A-plane
};

/// Designated critical point of the plane at `param`.
Cx designated_critical_point(Plane plane, Cx param);

/// |f^p(c) - c| at param; the defining equation of a center.
double center_residual(Plane plane, Cx param, int period);

/// Newton on g(param) = f^p(c(param)) - c(param). Throws NewtonDiverged, or
/// PeriodCollapsed when the critical orbit has a proper divisor of p as its
/// exact period.
CenterRecord find_center(Plane plane, int period, Cx seed, const ToleranceSet& tol);

/// Period and multiplier of the attracting cycle absorbing c_-(a).
/// Throws NoCycleFound.
std::pair<int, Cx> rho_p(Cx a, const ToleranceSet& tol);

/// Multiplier of the attracting cycle of P_A absorbing its free critical
/// point; throws NoCycleFound when there is none or its period differs.
Cx rho_q(Cx A, int period, const ToleranceSet& tol);

/// True when the orbit of c_-(a) over `period` steps stays on the side of
/// the dividing rays (the fixed rays 0 and 1/2, closed at the parabolic
/// point) where it starts. Centers failing this lie outside the baby copy.
/// Throws RayBroken.
bool critical_cycle_in_dividing_region(Cx a, int period);

/// A periodic point together with the parameter it belongs to.
struct CycleState {
  Cx z;
  Cx param;
};

/// Moves (z, param) so that z stays a period-p point whose multiplier runs
/// along the straight segment from -> to. Steps start at 1/steps and halve
/// on failure; below 2^-10 ContinuationStalled is thrown. Returns the number
/// of accepted steps.
int continue_multiplier(Plane plane, int period, CycleState& state, Cx from, Cx to,
                        int steps = 32);

/// Centers found by seeded Newton in both planes and their pairing.
struct CenterCatalog {
  int max_period = 0;
  std::vector<CenterRecord> cubic;  // sorted by (period, re, im)
  std::vector<CenterRecord> m1;
  std::vector<int> match;           // per cubic center: index into m1 or -1
  std::vector<std::string> issues;  // unmatched or ambiguous cases

  /// Index of the cubic center equal to `a` (to 1e-7) or -1.
  int find_cubic(Cx a, int period) const;
};

struct ScanOptions {
  int resolution = 512;
  double seed_threshold = 0.05;
  // Cubic scan box; the wedge polygon filters it.
  Cx cubic_lo{-1.5, 0.0};
  Cx cubic_hi{1.5, 3.0};
  // M1 scan box in the B = 1 - A^2 plane.
  Cx b_lo{-2.5, -2.0};
  Cx b_hi{1.5, 2.0};
  int threads = 0;
};

/// Closed polygon of the upper wedge bounded by the parameter rays 1/6 and
/// 2/6, closed at their landing point 0.
std::vector<Cx> default_wedge();

/// Raster-seeded Newton enumeration of all centers with period <= max_period
/// in the wedge (cubic plane) and in M1 (A-plane), plus their pairing:
/// period 1 directly, satellites through the internal angle at which they
/// hang off an already matched parent, primitives by their order along the
/// symmetry axis or by side.
CenterCatalog build_catalog(int max_period, const std::vector<Cx>& wedge,
                            const ToleranceSet& tol, const ScanOptions& opt = {});

/// Straightening map on a hyperbolic component of the wedge: the parameter
/// B whose P_A has an attracting cycle of the same period and multiplier,
/// reached by continuation from the matched center. Parameters in the lower
/// wedge are handled through a -> -a. A catalog is required for periods
/// above 1 and built on demand when absent.
ChiRecord chi(Cx a, const ToleranceSet& tol, const CenterCatalog* catalog = nullptr);

struct PeriodSummary {
  int period = 0;
  int count_cubic = 0;
  int count_m1 = 0;
  bool bijective = false;
};

struct CorrespondenceReport {
  int max_period = 0;
  CenterCatalog catalog;
  std::vector<ChiRecord> records;  // at each cubic center and at an interior probe
  std::vector<PeriodSummary> summary;
  std::vector<std::string> issues;
  bool bijective = false;
  double max_match_residual = 0.0;
};

/// Interior multiplier used for the second chi sample of each component.
inline const Cx kProbeMultiplier{0.35, 0.35};

CorrespondenceReport correspondence_report(int max_period, const std::vector<Cx>& wedge,
                                           const ToleranceSet& tol,
                                           const ScanOptions& opt = {});

std::string center_json(const CenterRecord& c);
std::string chi_json(const ChiRecord& r);
std::string catalog_json(const CenterCatalog& cat);
std::string report_json(const CorrespondenceReport& report);

}  // namespace plike
