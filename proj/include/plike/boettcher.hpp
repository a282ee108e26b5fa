#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "plike/angle.hpp"
#include "plike/complex.hpp"

namespace plike {

/// Escape rate G(z) = lim 3^-n log|z_n| of the cubic C_a. Orbits are followed
/// until |z_n| > 1e40, far enough that the truncation error stays below the
/// 1e-9 level of G(C_a z) = 3 G(z). Returns 0 when the orbit does not leave
/// the escape disk within `budget` iterations.
double green_potential(Cx a, Cx z, int budget = 5000);

/// Boettcher coordinate of C_a, tangent to the identity at infinity:
///   phi(z) = z * prod_k (z_{k+1} / z_k^3)^(3^-(k+1))
/// with principal logs. Throws NotEscaped, or BranchAmbiguity when a log
/// correction reaches modulus pi.
Cx boettcher(Cx a, Cx z, int budget = 5000);

/// The co-critical point -a - 2 c_-(a): the other preimage of the critical
/// value C_a(c_-).
Cx cocritical(Cx a);
/// d/da of cocritical(a).
Cx cocritical_derivative(Cx a);

enum class RayKind { Dynamical, Parameter };

struct RaySample {
  double t;  // potential
  Cx point;
};

struct Ray {
  RayKind kind = RayKind::Dynamical;
  Cx param{};  // a, for dynamical rays
  Turns angle;
  std::vector<RaySample> samples;  // strictly decreasing t
  std::optional<Cx> landing_estimate;
};

struct RayOptions {
  double step_ratio = 0.85;
  int newton_cap = 30;
  int max_halvings = 6;
};

/// Follows phi_a(z) = exp(t + 2 pi i angle) from t_max down to t_min.
/// Throws RayBroken when a step cannot be completed after max_halvings.
Ray trace_dynamical_ray(Cx a, Turns angle, double t_min, double t_max,
                        const RayOptions& opt = {});

/// Follows phi_a(cocritical(a)) = exp(t + 2 pi i angle) in the parameter
/// plane. Throws RayBroken.
Ray trace_parameter_ray(Turns angle, double t_min, double t_max, const RayOptions& opt = {});

/// Two header lines (`# <kind> ray angle=<angle>` and `t,re,im`), then one
/// row per sample.
void write_ray_csv(std::ostream& out, const Ray& ray);

/// Closed polygon bounded by two rays: `first` outward-in, then `apex`
/// (the common landing point, when known), `second` in reverse and a
/// clockwise circular arc back to the start.
std::vector<Cx> ray_wedge(const Ray& first, const Ray& second,
                          std::optional<Cx> apex = std::nullopt);

/// Even-odd rule.
bool point_in_polygon(const std::vector<Cx>& polygon, Cx p);

}  // namespace plike
