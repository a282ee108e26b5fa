#include "plike/family.hpp"

#include <cmath>

#include "plike/error.hpp"

namespace plike {

namespace {

const double kSqrt3 = std::sqrt(3.0);

Cx checked(Cx in, Cx out, const char* what) {
  if (is_finite(in) && !is_finite(out)) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " overflowed");
  }
  return out;
}

bool on_branch_segment(Cx a) {
  return a.imag() == 0.0 && std::abs(a.real()) <= kSqrt3;
}

}  // namespace

Cx eval(const FamilySlot& slot, Cx z) {
  switch (slot.kind()) {
    case FamilyKind::PerOne:
      if (z == Cx{}) throw Error(ErrorKind::PoleHit, "P_A has a pole at z = 0");
      return checked(z, PerOneMap{slot.param()}(z), "P_A");
    case FamilyKind::Cubic:
      return checked(z, CubicMap{slot.param()}(z), "C_a");
    case FamilyKind::ExtH2:
      if (z * z == Cx{-3.0, 0.0}) {
        throw Error(ErrorKind::PoleHit, "h_2 has poles at z^2 = -3");
      }
      return checked(z, H2Map{}(z), "h_2");
  }
  return {};
}

Cx derivative(const FamilySlot& slot, Cx z) {
  switch (slot.kind()) {
    case FamilyKind::PerOne:
      if (z == Cx{}) throw Error(ErrorKind::PoleHit, "P_A has a pole at z = 0");
      return checked(z, PerOneMap{slot.param()}.d(z), "P_A'");
    case FamilyKind::Cubic:
      return checked(z, CubicMap{slot.param()}.d(z), "C_a'");
    case FamilyKind::ExtH2:
      if (z * z == Cx{-3.0, 0.0}) {
        throw Error(ErrorKind::PoleHit, "h_2 has poles at z^2 = -3");
      }
      return checked(z, H2Map{}.d(z), "h_2'");
  }
  return {};
}

Cx cubic_root_branch(Cx a) {
  if (on_branch_segment(a)) {
    return {0.0, std::sqrt(3.0 - a.real() * a.real())};
  }
  return a * std::sqrt(1.0 - 3.0 / (a * a));
}

CubicCriticalPoints cubic_critical_points(Cx a) {
  const Cx s = cubic_root_branch(a);
  return {(-a + s) / 3.0, (-a - s) / 3.0};
}

bool crosses_critical_branch_cut(Cx a0, Cx a1) {
  if (on_branch_segment(a0) || on_branch_segment(a1)) return true;
  if ((a0.imag() > 0) == (a1.imag() > 0)) return false;
  // Real axis crossing point of the segment.
  const double t = a0.imag() / (a0.imag() - a1.imag());
  const double x = a0.real() + t * (a1.real() - a0.real());
  return std::abs(x) <= kSqrt3;
}

std::vector<ExtPoint> critical_points(const FamilySlot& slot) {
  switch (slot.kind()) {
    case FamilyKind::PerOne:
      return {ExtPoint::finite(1.0), ExtPoint::finite(-1.0)};
    case FamilyKind::Cubic: {
      const auto c = cubic_critical_points(slot.param());
      return {ExtPoint::finite(c.plus), ExtPoint::finite(c.minus)};
    }
    case FamilyKind::ExtH2:
      return {ExtPoint::finite(0.0), ExtPoint::at_infinity()};
  }
  return {};
}

std::vector<FixedPoint> fixed_points(const FamilySlot& slot) {
  switch (slot.kind()) {
    case FamilyKind::PerOne: {
      const Cx A = slot.param();
      if (A == Cx{}) {
        throw Error(ErrorKind::DegenerateParabolic,
                    "P_0: the free fixed point merges with infinity");
      }
      return {{ExtPoint::at_infinity(), 1.0, true},
              {ExtPoint::finite(-1.0 / A), 1.0 - A * A, false}};
    }
    case FamilyKind::Cubic: {
      const Cx a = slot.param();
      if (a == Cx{}) {
        throw Error(ErrorKind::DegenerateParabolic,
                    "C_0: the fixed point -a merges with 0");
      }
      return {{ExtPoint::finite(0.0), 1.0, true},
              {ExtPoint::finite(-a), 1.0 + a * a, false}};
    }
    case FamilyKind::ExtH2:
      // (z - 1)^3 = 0: a triple fixed point.
      return {{ExtPoint::finite(1.0), 1.0, true}};
  }
  return {};
}

}  // namespace plike
