#pragma once

#include <vector>

#include "plike/complex.hpp"
#include "plike/family.hpp"
#include "plike/tolerance.hpp"

namespace plike {

enum class Fate { EscapesSuper, ConvergesParabolic, AttractedToCycle, Undetermined };

const char* to_string(Fate fate);

struct OrbitClassification {
  Fate fate = Fate::Undetermined;
  int period = 0;     // AttractedToCycle only
  Cx multiplier{};    // AttractedToCycle only, |multiplier| < 1
  int iterations_used = 0;
  Cx last_value{};
};

struct Cycle {
  int period = 0;
  std::vector<Cx> points;
  Cx multiplier{};
  double residual = 0.0;
};

/// Escape radius of C_a: beyond it |C_a(z)| >= 2|z|.
double cubic_escape_radius(Cx a);

/// Decides the fate of the orbit of z0 within `budget` iterations.
///
/// Cycles are searched in windows of `max_period` iterations: each window
/// pins a reference point and reports the first later point within
/// tol.cycle_detect of it. A hit is refined by Newton and accepted only when
/// |multiplier| < 1 - tol.indifferent_margin; indifferent hits never produce
/// AttractedToCycle and the orbit keeps running until the budget is spent.
///
/// Throws PoleHit if the orbit lands exactly on a pole.
OrbitClassification classify_orbit(const FamilySlot& slot, Cx z0, int budget,
                                   const ToleranceSet& tol, int max_period = 64);

/// Finds the attracting (or at least periodic) cycle the orbit of z0 settles
/// on: skips a transient of budget/2 iterations, takes the smallest period
/// p <= max_period with |z_{n+p} - z_n| < tol.cycle_detect, then Newton
/// refines f^p(z) = z to tol.cycle_refine. Throws NoCycleFound.
Cycle detect_and_refine_cycle(const FamilySlot& slot, Cx z0, int max_period,
                              int budget, const ToleranceSet& tol);

/// Newton refinement of a period-p point of the slot's map starting at z.
/// Returns the full cycle; throws NoCycleFound when Newton fails.
Cycle refine_cycle(const FamilySlot& slot, Cx z, int period, const ToleranceSet& tol);

/// Product of derivatives over the given points.
Cx multiplier_along(const FamilySlot& slot, const std::vector<Cx>& points);

}  // namespace plike
