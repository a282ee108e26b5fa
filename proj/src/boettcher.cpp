#include "plike/boettcher.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "plike/error.hpp"
#include "plike/family.hpp"
#include "plike/orbit.hpp"

namespace plike {

namespace {

constexpr double kBailout2 = 1e80;  // |z| > 1e40

// Depth n of the Newton equation: the smallest n with 3^n t >= log(1e8) +
// 2 log max(1, |a|), where phi(w) = w + a/3 holds to machine precision.
int depth_for(double t, Cx a) {
  const double level = std::log(1e8) + 2.0 * std::log(std::max(1.0, std::abs(a)));
  int n = 0;
  double scaled = t;
  while (scaled < level) {
    scaled *= 3.0;
    ++n;
  }
  return n;
}

// Target w = exp(3^n t + 2 pi i 3^n angle) of the depth-n equation, as its log.
Cx log_target(double t, const Turns& angle, int n) {
  return {std::pow(3.0, n) * t, kTwoPi * angle.tripled(n).value()};
}

struct Residual {
  Cx value;  // Log((z_n + a/3) / w)
  Cx slope;  // d value / d unknown
};

Residual dynamical_residual(Cx a, Cx z, double t, const Turns& angle) {
  const int n = depth_for(t, a);
  const CubicMap f{a};
  Cx d{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    d *= f.d(z);
    z = f(z);
  }
  const Cx shifted = z + a / 3.0;
  return {std::log(shifted) - log_target(t, angle, n), d / shifted};
}

Residual parameter_residual(Cx a, double t, const Turns& angle) {
  const int n = depth_for(t, a);
  const CubicMap f{a};
  Cx z = cocritical(a);
  Cx dz = cocritical_derivative(a);
  for (int k = 0; k < n; ++k) {
    dz = f.d(z) * dz + z * z;
    z = f(z);
  }
  const Cx shifted = z + a / 3.0;
  return {std::log(shifted) - log_target(t, angle, n), (dz + 1.0 / 3.0) / shifted};
}

// Newton on the log residual; the branch of Log is fixed by continuity
// since consecutive ray points differ by a small argument.
template <class ResidualFn>
bool newton_log(ResidualFn&& residual, Cx& x, int cap) {
  for (int it = 0; it < cap; ++it) {
    const Residual r = residual(x);
    if (!is_finite(r.value) || !is_finite(r.slope) || r.slope == Cx{}) return false;
    // Wrap the imaginary part so a 2 pi slip is not mistaken for a residual.
    Cx v = r.value;
    v.imag(std::remainder(v.imag(), kTwoPi));
    const Cx step = v / r.slope;
    // Far from the landing region the residual is close to N log x, so large
    // steps are taken multiplicatively.
    const Cx ratio = step / x;
    x = std::abs(ratio) < 0.5 ? x - step : x * std::exp(-ratio);
    if (!is_finite(x)) return false;
    if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(x))) {
      Cx check = residual(x).value;
      check.imag(std::remainder(check.imag(), kTwoPi));
      return std::abs(check) < 1e-9;
    }
  }
  return false;
}

template <class ResidualFn>
Ray trace(RayKind kind, Cx param, const Turns& angle, double t_min, double t_max,
          double t_start, Cx seed, ResidualFn&& residual_at, const RayOptions& opt) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw Error(ErrorKind::InvalidArgument, "ray potentials must satisfy 0 < t_min < t_max");
  }
  if (!(opt.step_ratio > 0.0 && opt.step_ratio < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "step ratio must lie in (0, 1)");
  }
  Ray ray;
  ray.kind = kind;
  ray.param = param;
  ray.angle = angle;

  auto solve = [&](Cx& x, double t) {
    return newton_log([&](Cx y) { return residual_at(y, t); }, x, opt.newton_cap);
  };

  double t = t_start;
  Cx x = seed;
  if (!solve(x, t)) throw Error(ErrorKind::RayBroken, "ray seed did not converge");
  if (t <= t_max) ray.samples.push_back({t, x});

  double last_move = -1.0;
  while (t > t_min) {
    bool advanced = false;
    const double full = t * (1.0 - opt.step_ratio);
    for (int h = 0; h <= opt.max_halvings && !advanced; ++h) {
      double next = std::max(t - std::ldexp(full, -h), t_min);
      if (t > t_max && next < t_max) next = t_max;
      Cx y = x;
      if (!solve(y, next)) continue;
      const double move = std::abs(y - x);
      if (last_move >= 0.0 && move > 8.0 * last_move + 1e-12) continue;
      x = y;
      t = next;
      last_move = move;
      advanced = true;
    }
    if (!advanced) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "continuation failed below potential %.6g", t);
      throw Error(ErrorKind::RayBroken, buf);
    }
    if (t <= t_max) ray.samples.push_back({t, x});
  }
  return ray;
}

}  // namespace

double green_potential(Cx a, Cx z, int budget) {
  const CubicMap f{a};
  const double r = cubic_escape_radius(a);
  const double r2 = r * r;
  double scale = 1.0;
  for (int n = 0;; ++n) {
    const double m = abs2(z);
    if (m > kBailout2) return 0.5 * std::log(m) * scale;
    if (n >= budget && m <= r2) return 0.0;
    z = f(z);
    scale /= 3.0;
  }
}

Cx boettcher(Cx a, Cx z0, int budget) {
  const CubicMap f{a};
  const double r = cubic_escape_radius(a);
  std::vector<Cx> orbit{z0};
  Cx z = z0;
  for (int n = 0; abs2(z) <= kBailout2; ++n) {
    if (n >= budget && abs2(z) <= r * r) {
      throw Error(ErrorKind::NotEscaped, "orbit does not escape within budget");
    }
    z = f(z);
    orbit.push_back(z);
  }
  Cx sum{};
  double scale = 1.0 / 3.0;
  for (std::size_t k = 0; k + 1 < orbit.size(); ++k) {
    const Cx w = orbit[k];
    const Cx term = std::log(1.0 + (a + 1.0 / w) / w);
    if (!is_finite(term) || std::abs(term) >= std::numbers::pi) {
      throw Error(ErrorKind::BranchAmbiguity, "Boettcher correction too large; start closer to infinity");
    }
    sum += term * scale;
    scale /= 3.0;
  }
  return z0 * std::exp(sum);
}

Cx cocritical(Cx a) { return -a - 2.0 * cubic_critical_points(a).minus; }

Cx cocritical_derivative(Cx a) {
  const Cx s = cubic_root_branch(a);
  return -1.0 / 3.0 + 2.0 * a / (3.0 * s);
}

Ray trace_dynamical_ray(Cx a, Turns angle, double t_min, double t_max, const RayOptions& opt) {
  const double level = std::log(1e8) + 2.0 * std::log(std::max(1.0, std::abs(a)));
  const double t_start = std::max(t_max, level);
  const Cx seed = std::exp(Cx(t_start, kTwoPi * angle.value())) - a / 3.0;
  Ray ray = trace(
      RayKind::Dynamical, a, angle, t_min, t_max, t_start, seed,
      [&](Cx z, double t) { return dynamical_residual(a, z, t, angle); }, opt);
  if (t_min <= 1e-4) ray.landing_estimate = ray.samples.back().point;
  return ray;
}

Ray trace_parameter_ray(Turns angle, double t_min, double t_max, const RayOptions& opt) {
  // Phi(a) ~ (4/27)^(1/3) a at infinity.
  const double t_start = std::max(t_max, 8.0);
  const Cx seed = std::exp(Cx(t_start, kTwoPi * angle.value())) / std::cbrt(4.0 / 27.0);
  Ray ray = trace(
      RayKind::Parameter, Cx{}, angle, t_min, t_max, t_start, seed,
      [&](Cx a, double t) { return parameter_residual(a, t, angle); }, opt);
  ray.landing_estimate = ray.samples.back().point;
  return ray;
}

void write_ray_csv(std::ostream& out, const Ray& ray) {
  out << "# " << (ray.kind == RayKind::Dynamical ? "dynamical" : "parameter")
      << " ray angle=" << ray.angle.to_string();
  if (ray.kind == RayKind::Dynamical) {
    char buf[80];
    std::snprintf(buf, sizeof buf, " a=%.17g,%.17g", ray.param.real(), ray.param.imag());
    out << buf;
  }
  out << "\nt,re,im\n";
  char row[96];
  for (const auto& s : ray.samples) {
    std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", s.t, s.point.real(), s.point.imag());
    out << row;
  }
}

std::vector<Cx> ray_wedge(const Ray& first, const Ray& second, std::optional<Cx> apex) {
  std::vector<Cx> poly;
  if (first.samples.empty() || second.samples.empty()) return poly;
  for (const auto& s : first.samples) poly.push_back(s.point);
  if (apex) poly.push_back(*apex);
  for (auto it = second.samples.rbegin(); it != second.samples.rend(); ++it) {
    poly.push_back(it->point);
  }
  // Arc back from the outer end of `second` to the outer end of `first`,
  // turning clockwise.
  const Cx p2 = second.samples.front().point;
  const Cx p1 = first.samples.front().point;
  const double r = 0.5 * (std::abs(p1) + std::abs(p2));
  const double start = std::arg(p2);
  double sweep = std::fmod(start - std::arg(p1), kTwoPi);
  if (sweep < 0) sweep += kTwoPi;
  const int steps = 64;
  for (int k = 1; k < steps; ++k) poly.push_back(std::polar(r, start - sweep * k / steps));
  return poly;
}

bool point_in_polygon(const std::vector<Cx>& poly, Cx p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Cx u = poly[i];
    const Cx v = poly[j];
    if ((u.imag() > p.imag()) != (v.imag() > p.imag())) {
      const double x = u.real() + (p.imag() - u.imag()) * (v.real() - u.real()) / (v.imag() - u.imag());
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace plike
