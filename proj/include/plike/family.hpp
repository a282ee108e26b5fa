#pragma once

#include <vector>

#include "plike/complex.hpp"

namespace plike {

enum class FamilyKind { PerOne, Cubic, ExtH2 };

/// A member of one of the three map families:
///   PerOne  P_A(z) = z + 1/z + A        (parabolic fixed point at infinity)
///   Cubic   C_a(z) = z + a z^2 + z^3    (parabolic fixed point at 0)
///   ExtH2   h_2(z) = (z^2 + 1/3) / (z^2/3 + 1), the parabolic external map
class FamilySlot {
 public:
  static FamilySlot per_one(Cx A) { return {FamilyKind::PerOne, A}; }
  static FamilySlot cubic(Cx a) { return {FamilyKind::Cubic, a}; }
  static FamilySlot ext_h2() { return {FamilyKind::ExtH2, Cx{}}; }

  FamilyKind kind() const { return kind_; }
  /// A for PerOne, a for Cubic, 0 for ExtH2 (which carries no parameter).
  Cx param() const { return param_; }

  /// PerOne with A = 0 and Cubic with a = 0 have a parabolic point of
  /// multiplicity 2. ExtH2 has one too, but is never used where it matters.
  bool degenerate_parabolic() const {
    return kind_ != FamilyKind::ExtH2 && param_ == Cx{};
  }

  FamilySlot conjugated() const { return {kind_, std::conj(param_)}; }
  FamilySlot negated() const { return {kind_, -param_}; }

  friend bool operator==(const FamilySlot&, const FamilySlot&) = default;

 private:
  FamilySlot(FamilyKind kind, Cx param) : kind_(kind), param_(param) {}

  FamilyKind kind_;
  Cx param_;
};

/// Throws PoleHit at z = 0 (PerOne) or z^2 = -3 (ExtH2), NonFinite when a
/// finite input overflows.
Cx eval(const FamilySlot& slot, Cx z);
Cx derivative(const FamilySlot& slot, Cx z);

/// The square root of a^2 - 3 used for the cubic critical points. Equal to
/// a * sqrt(1 - 3/a^2) (principal root) off the segment [-sqrt3, sqrt3], which
/// makes it continuous there, odd in a and ~ a at infinity; on the segment it
/// takes the limit from the upper half plane, i * sqrt(3 - a^2).
Cx cubic_root_branch(Cx a);

struct CubicCriticalPoints {
  Cx plus;   // lies in the parabolic basin of 0 for a = i
  Cx minus;  // the free critical point there
};
CubicCriticalPoints cubic_critical_points(Cx a);

/// Labels of the cubic critical points are continuous along the straight
/// path a0 -> a1 unless it crosses the real segment [-sqrt3, sqrt3].
bool crosses_critical_branch_cut(Cx a0, Cx a1);

/// PerOne: {1, -1}; Cubic: {c_+, c_-}; ExtH2: {0, infinity}.
std::vector<ExtPoint> critical_points(const FamilySlot& slot);

struct FixedPoint {
  ExtPoint point;
  Cx multiplier;
  bool parabolic = false;
};

/// PerOne: {infinity (parabolic), -1/A}; Cubic: {0 (parabolic), -a};
/// ExtH2: {1 (parabolic)}. Throws DegenerateParabolic when A = 0 / a = 0.
std::vector<FixedPoint> fixed_points(const FamilySlot& slot);

// Inlined map functors for the hot iteration loops. They skip the pole and
// overflow checks of eval(); callers test escape before overflow can occur.
struct CubicMap {
  Cx a;
  Cx operator()(Cx z) const { return z + (a + z) * (z * z); }
  Cx d(Cx z) const { return 1.0 + (2.0 * a + 3.0 * z) * z; }
  static bool pole(Cx) { return false; }
};

struct PerOneMap {
  Cx A;
  Cx operator()(Cx z) const { return z + 1.0 / z + A; }
  Cx d(Cx z) const { return 1.0 - 1.0 / (z * z); }
  static bool pole(Cx z) { return z == Cx{}; }
};

struct H2Map {
  Cx operator()(Cx z) const {
    const Cx z2 = z * z;
    return (z2 + 1.0 / 3.0) / (z2 / 3.0 + 1.0);
  }
  Cx d(Cx z) const {
    const Cx den = z * z / 3.0 + 1.0;
    return (16.0 / 9.0) * z / (den * den);
  }
  static bool pole(Cx z) { return z * z == Cx{-3.0, 0.0}; }
};

/// Calls fn with the inlined map functor matching the slot.
template <class Fn>
decltype(auto) visit_map(const FamilySlot& slot, Fn&& fn) {
  switch (slot.kind()) {
    case FamilyKind::Cubic: return fn(CubicMap{slot.param()});
    case FamilyKind::PerOne: return fn(PerOneMap{slot.param()});
    case FamilyKind::ExtH2: break;
  }
  return fn(H2Map{});
}

}  // namespace plike
