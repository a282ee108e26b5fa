#include "plike/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "plike/error.hpp"
#include "plike/fatou.hpp"

namespace plike {

const char* to_string(Fate fate) {
  switch (fate) {
    case Fate::EscapesSuper: return "EscapesSuper";
    case Fate::ConvergesParabolic: return "ConvergesParabolic";
    case Fate::AttractedToCycle: return "AttractedToCycle";
    case Fate::Undetermined: return "Undetermined";
  }
  return "?";
}

double cubic_escape_radius(Cx a) { return std::max(4.0, 2.0 * (std::abs(a) + 2.0)); }

namespace {

struct EscapeCheck {
  double radius2 = 0.0;  // 0 disables the check
  bool operator()(Cx z) const { return radius2 > 0.0 && abs2(z) > radius2; }
};

EscapeCheck escape_check(const FamilySlot& slot) {
  if (slot.kind() != FamilyKind::Cubic) return {};
  const double r = cubic_escape_radius(slot.param());
  return {r * r};
}

double scale2(Cx z) { return std::max(1.0, abs2(z)); }

template <class Map>
void iterate_with_derivative(const Map& f, Cx z, int n, Cx& out, Cx& dout) {
  Cx d{1.0, 0.0};
  for (int i = 0; i < n; ++i) {
    d *= f.d(z);
    z = f(z);
  }
  out = z;
  dout = d;
}

template <class Map>
Cx iterate(const Map& f, Cx z, int n) {
  for (int i = 0; i < n; ++i) z = f(z);
  return z;
}

/// Newton on f^p(z) - z; returns false when it does not settle.
template <class Map>
bool newton_periodic(const Map& f, Cx& z, int period, const ToleranceSet& tol) {
  for (int it = 0; it < 60; ++it) {
    Cx w, d;
    iterate_with_derivative(f, z, period, w, d);
    const Cx r = w - z;
    if (!is_finite(r)) return false;
    if (abs2(r) <= tol.cycle_refine * tol.cycle_refine * scale2(z)) return true;
    const Cx den = d - 1.0;
    if (den == Cx{}) return false;
    const Cx step = r / den;
    z -= step;
    if (!is_finite(z)) return false;
    // Stagnation at rounding level counts as converged if the cycle is tight.
    if (abs2(step) <= 1e-30 * scale2(z)) {
      iterate_with_derivative(f, z, period, w, d);
      return abs2(w - z) <= tol.cycle_detect * tol.cycle_detect * scale2(z);
    }
  }
  return false;
}

template <class Map>
Cycle refine_impl(const Map& f, Cx z, int period, const ToleranceSet& tol) {
  if (period < 1) throw Error(ErrorKind::InvalidArgument, "period must be >= 1");
  if (!newton_periodic(f, z, period, tol)) {
    throw Error(ErrorKind::NoCycleFound, "Newton refinement of the cycle failed");
  }
  // Reduce to the exact period.
  for (int d = 1; d < period; ++d) {
    if (period % d != 0) continue;
    const Cx w = iterate(f, z, d);
    if (abs2(w - z) < tol.cycle_detect * tol.cycle_detect * scale2(z)) {
      Cx zd = z;
      if (newton_periodic(f, zd, d, tol)) {
        z = zd;
        period = d;
        break;
      }
    }
  }
  Cycle c;
  c.period = period;
  c.points.reserve(period);
  Cx p = z;
  Cx m{1.0, 0.0};
  for (int i = 0; i < period; ++i) {
    c.points.push_back(p);
    m *= f.d(p);
    p = f(p);
  }
  c.multiplier = m;
  c.residual = std::abs(p - z);
  return c;
}

template <class Map>
OrbitClassification classify_impl(const Map& f, const FamilySlot& slot, Cx z, int budget,
                                  const ToleranceSet& tol, int max_period) {
  const EscapeCheck escapes = escape_check(slot);
  ParabolicDriftTest drift(slot);
  const double detect2 = tol.cycle_detect * tol.cycle_detect;

  Cx ref = z;
  int ref_iter = 0;
  bool searching = true;

  for (int n = 0;; ++n) {
    if (escapes(z)) return {Fate::EscapesSuper, 0, {}, n, z};
    if (drift.step(z)) return {Fate::ConvergesParabolic, 0, {}, n, z};
    if (slot.kind() == FamilyKind::Cubic && z == Cx{}) {
      return {Fate::ConvergesParabolic, 0, {}, n, z};
    }

    if (searching && n > ref_iter) {
      if (abs2(z - ref) < detect2 * scale2(ref)) {
        try {
          const Cycle c = refine_impl(f, z, n - ref_iter, tol);
          const double mod = std::abs(c.multiplier);
          if (abs2(c.points.front() - z) < 1e-6 * scale2(z)) {
            if (mod < 1.0 - tol.indifferent_margin) {
              return {Fate::AttractedToCycle, c.period, c.multiplier, n, z};
            }
            // Indifferent: never classified, run out the budget.
            if (mod < 1.0 + tol.indifferent_margin) searching = false;
          }
        } catch (const Error&) {
          // Not a cycle after all; keep iterating.
        }
        ref = z;
        ref_iter = n;
      } else if (n - ref_iter >= max_period) {
        ref = z;
        ref_iter = n;
      }
    }

    if (n >= budget) return {Fate::Undetermined, 0, {}, budget, z};
    if (Map::pole(z)) throw Error(ErrorKind::PoleHit, "orbit hit a pole");
    z = f(z);
  }
}

template <class Map>
Cycle detect_impl(const Map& f, const FamilySlot& slot, Cx z, int max_period, int budget,
                  const ToleranceSet& tol) {
  const EscapeCheck escapes = escape_check(slot);
  ParabolicDriftTest drift(slot);
  auto advance = [&](Cx w) {
    if (escapes(w) || drift.step(w)) {
      throw Error(ErrorKind::NoCycleFound, "orbit escapes to the parabolic or superattracting point");
    }
    if (Map::pole(w)) throw Error(ErrorKind::NoCycleFound, "orbit hit a pole");
    const Cx next = f(w);
    if (!is_finite(next)) throw Error(ErrorKind::NoCycleFound, "orbit overflowed");
    return next;
  };

  const int transient = budget / 2;
  for (int n = 0; n < transient; ++n) z = advance(z);

  const double detect2 = tol.cycle_detect * tol.cycle_detect;
  int n = transient;
  while (n < budget) {
    const Cx ref = z;
    for (int k = 1; k <= max_period && n < budget; ++k, ++n) {
      z = advance(z);
      if (abs2(z - ref) < detect2 * scale2(ref)) return refine_impl(f, ref, k, tol);
    }
  }
  throw Error(ErrorKind::NoCycleFound, "no cycle of period <= max_period within budget");
}

}  // namespace

OrbitClassification classify_orbit(const FamilySlot& slot, Cx z0, int budget,
                                   const ToleranceSet& tol, int max_period) {
  if (budget < 1) throw Error(ErrorKind::InvalidArgument, "budget must be >= 1");
  if (max_period < 1) throw Error(ErrorKind::InvalidArgument, "max_period must be >= 1");
  return visit_map(slot, [&](const auto& f) {
    return classify_impl(f, slot, z0, budget, tol, max_period);
  });
}

Cycle detect_and_refine_cycle(const FamilySlot& slot, Cx z0, int max_period, int budget,
                              const ToleranceSet& tol) {
  if (budget < 2) throw Error(ErrorKind::InvalidArgument, "budget must be >= 2");
  if (max_period < 1) throw Error(ErrorKind::InvalidArgument, "max_period must be >= 1");
  return visit_map(slot, [&](const auto& f) {
    return detect_impl(f, slot, z0, max_period, budget, tol);
  });
}

Cycle refine_cycle(const FamilySlot& slot, Cx z, int period, const ToleranceSet& tol) {
  return visit_map(slot, [&](const auto& f) { return refine_impl(f, z, period, tol); });
}

Cx multiplier_along(const FamilySlot& slot, const std::vector<Cx>& points) {
  Cx m{1.0, 0.0};
  for (Cx p : points) m *= derivative(slot, p);
  return m;
}

}  // namespace plike
