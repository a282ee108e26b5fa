#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace plike {

using Cx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point of the Riemann sphere. `infinite` marks the point at infinity;
/// `value` is meaningless in that case.
struct ExtPoint {
  Cx value{};
  bool infinite = false;

  static ExtPoint finite(Cx z) { return {z, false}; }
  static ExtPoint at_infinity() { return {Cx{}, true}; }
};

inline bool is_finite(Cx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// |z|^2 without the hypot scaling of std::abs.
inline double abs2(Cx z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace plike
