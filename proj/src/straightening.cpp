#include "plike/straightening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "json.hpp"
#include "plike/angle.hpp"
#include "plike/boettcher.hpp"
#include "plike/error.hpp"
#include "plike/family.hpp"
#include "plike/orbit.hpp"
#include "plike/worker_pool.hpp"

namespace plike {

const char* to_string(Plane plane) {
  return plane == Plane::CubicA ? "CubicA" : "PerOneA";
}

namespace {

// The map of a plane with its first and second partials in z and the
// parameter.
struct PlaneMap {
  Plane plane;
  Cx p;

  Cx f(Cx z) const {
    return plane == Plane::CubicA ? z + (p + z) * (z * z) : z + 1.0 / z + p;
  }
  Cx fz(Cx z) const {
    return plane == Plane::CubicA ? 1.0 + (2.0 * p + 3.0 * z) * z : 1.0 - 1.0 / (z * z);
  }
  Cx fzz(Cx z) const {
    return plane == Plane::CubicA ? 2.0 * p + 6.0 * z : 2.0 / (z * z * z);
  }
  Cx fp(Cx z) const { return plane == Plane::CubicA ? z * z : Cx{1.0, 0.0}; }
  Cx fzp(Cx z) const { return plane == Plane::CubicA ? 2.0 * z : Cx{}; }
  bool pole(Cx z) const { return plane == Plane::PerOneA && z == Cx{}; }
};

Cx critical_derivative(Plane plane, Cx p) {
  if (plane == Plane::PerOneA) return Cx{};
  // c_-(a) = (-a - s)/3 with s^2 = a^2 - 3.
  return (-1.0 - p / cubic_root_branch(p)) / 3.0;
}

struct CenterEquation {
  Cx g;
  Cx dg;
};

std::optional<CenterEquation> center_equation(Plane plane, Cx p, int period) {
  const PlaneMap m{plane, p};
  const Cx c = designated_critical_point(plane, p);
  const Cx dc = critical_derivative(plane, p);
  Cx z = c;
  Cx dz = dc;
  for (int k = 0; k < period; ++k) {
    if (m.pole(z)) return std::nullopt;
    dz = m.fz(z) * dz + m.fp(z);
    z = m.f(z);
  }
  if (!is_finite(z) || !is_finite(dz)) return std::nullopt;
  return CenterEquation{z - c, dz - dc};
}

std::optional<int> exact_period(const PlaneMap& m, Cx z, int period, double eps) {
  Cx w = z;
  for (int d = 1; d < period; ++d) {
    if (m.pole(w)) return std::nullopt;
    w = m.f(w);
    if (period % d == 0 && std::abs(w - z) < eps * std::max(1.0, std::abs(z))) return d;
  }
  return period;
}

// One Newton solve of f^p(z) = z, (f^p)'(z) = rho in the unknowns (z, param).
bool track_newton(Plane plane, int period, Cx rho, CycleState& s) {
  for (int it = 0; it < 30; ++it) {
    const PlaneMap m{plane, s.param};
    Cx z = s.z;
    Cx Z{1.0, 0.0}, ZZ{}, W{}, ZW{};
    for (int k = 0; k < period; ++k) {
      if (m.pole(z)) return false;
      const Cx fz = m.fz(z);
      const Cx fzz = m.fzz(z);
      const Cx zz_next = fzz * Z * Z + fz * ZZ;
      const Cx zw_next = (fzz * W + m.fzp(z)) * Z + fz * ZW;
      W = fz * W + m.fp(z);
      Z = fz * Z;
      ZZ = zz_next;
      ZW = zw_next;
      z = m.f(z);
    }
    const Cx F1 = z - s.z;
    const Cx F2 = Z - rho;
    const Cx j11 = Z - 1.0;
    const Cx det = j11 * ZW - W * ZZ;
    if (!is_finite(F1) || !is_finite(F2) || det == Cx{} || !is_finite(det)) return false;
    const Cx dz = (F1 * ZW - W * F2) / det;
    const Cx dp = (j11 * F2 - ZZ * F1) / det;
    s.z -= dz;
    s.param -= dp;
    if (!is_finite(s.z) || !is_finite(s.param)) return false;
    if (std::abs(dz) <= 1e-13 * std::max(1.0, std::abs(s.z)) &&
        std::abs(dp) <= 1e-14 * std::max(1.0, std::abs(s.param))) {
      return std::abs(F1) <= 1e-10 * std::max(1.0, std::abs(s.z)) && std::abs(F2) <= 1e-10;
    }
  }
  return false;
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

bool by_period_then_param(const CenterRecord& x, const CenterRecord& y) {
  if (x.period != y.period) return x.period < y.period;
  if (x.param.real() != y.param.real()) return x.param.real() < y.param.real();
  return x.param.imag() < y.param.imag();
}

Cx b_of(Cx A) { return 1.0 - A * A; }

// Symmetry-axis coordinate and side: the cubic wedge is symmetric under
// a -> -conj(a), M1 under B -> conj(B).
bool on_axis(const CenterRecord& c) {
  const double x = c.plane == Plane::CubicA ? c.param.real() : b_of(c.param).imag();
  return std::abs(x) < 1e-7;
}
int side(const CenterRecord& c) {
  return sign_of(c.plane == Plane::CubicA ? c.param.real() : b_of(c.param).imag());
}
Cx position(const CenterRecord& c) {
  return c.plane == Plane::CubicA ? c.param : b_of(c.param);
}

// Nearest center of the given period to `point` among `list`, measured in
// the plane's display coordinate. -1 when there is none, -2 when the
// runner-up is within twice the nearest distance.
int nearest_center(const std::vector<CenterRecord>& list, int period, Cx point) {
  int best = -1;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = d1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].period != period) continue;
    const double d = std::abs(position(list[i]) - point);
    if (d < d1) {
      d2 = d1;
      d1 = d;
      best = static_cast<int>(i);
    } else if (d < d2) {
      d2 = d;
    }
  }
  if (best >= 0 && d2 < 2.0 * d1) return -2;
  return best;
}

// Parameter reached by moving from a center's superattracting cycle to the
// multiplier rho.
Cx probe(const CenterRecord& c, Cx rho) {
  CycleState s{designated_critical_point(c.plane, c.param), c.param};
  continue_multiplier(c.plane, c.period, s, Cx{}, rho);
  return s.param;
}

std::vector<CenterRecord> enumerate_centers(Plane plane, int max_period,
                                            const std::vector<Cx>& wedge,
                                            const ToleranceSet& tol, const ScanOptions& opt,
                                            std::vector<std::string>* issues) {
  const int n = opt.resolution;
  const bool cubic = plane == Plane::CubicA;
  const Cx lo = cubic ? opt.cubic_lo : opt.b_lo;
  const Cx hi = cubic ? opt.cubic_hi : opt.b_hi;
  auto grid_point = [&](int i, int j) {
    const Cx w{lo.real() + (i + 0.5) / n * (hi.real() - lo.real()),
               lo.imag() + (j + 0.5) / n * (hi.imag() - lo.imag())};
    return cubic ? w : std::sqrt(1.0 - w);
  };

  // field[(p - 1) * n * n + j * n + i] = |g_p / g_p'|, the Newton distance
  // to the nearest period-p center.
  const std::size_t plane_size = static_cast<std::size_t>(n) * n;
  std::vector<double> field(plane_size * max_period,
                            std::numeric_limits<double>::infinity());
  parallel_for(n, opt.threads, [&](int j) {
    for (int i = 0; i < n; ++i) {
      const Cx p = grid_point(i, j);
      const PlaneMap m{plane, p};
      const Cx c = designated_critical_point(plane, p);
      const Cx dc = critical_derivative(plane, p);
      Cx z = c, dz = dc;
      for (int k = 1; k <= max_period; ++k) {
        if (m.pole(z) || abs2(z) > 1e20) break;
        dz = m.fz(z) * dz + m.fp(z);
        z = m.f(z);
        const Cx dg = dz - dc;
        if (dg == Cx{}) continue;
        const double v = std::abs((z - c) / dg);
        if (std::isfinite(v)) field[(k - 1) * plane_size + j * n + i] = v;
      }
    }
  });

  struct Seed {
    int period;
    Cx param;
  };
  std::vector<Seed> seeds;
  for (int k = 1; k <= max_period; ++k) {
    const double* f = field.data() + (k - 1) * plane_size;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double v = f[j * n + i];
        if (!(v < opt.seed_threshold)) continue;
        bool minimum = true;
        for (int dj = -1; dj <= 1 && minimum; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const int ii = i + di, jj = j + dj;
            if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
            if (f[jj * n + ii] < v) {
              minimum = false;
              break;
            }
          }
        }
        if (minimum) seeds.push_back({k, grid_point(i, j)});
      }
    }
  }

  std::vector<std::optional<CenterRecord>> found(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), opt.threads, [&](int s) {
    try {
      found[s] = find_center(plane, seeds[s].period, seeds[s].param, tol);
    } catch (const Error&) {
    }
  });

  std::vector<CenterRecord> centers;
  for (const auto& c : found) {
    if (!c) continue;
    if (cubic && !point_in_polygon(wedge, c->param)) continue;
    const Cx key = position(*c);
    const bool dup = std::any_of(centers.begin(), centers.end(), [&](const CenterRecord& o) {
      return o.period == c->period &&
             std::abs(position(o) - key) < 1e-7 * std::max(1.0, std::abs(key));
    });
    if (!dup) centers.push_back(*c);
  }
  if (cubic) {
    std::vector<int> inside(centers.size(), 0);
    std::vector<std::string> why(centers.size());
    parallel_for(static_cast<int>(centers.size()), opt.threads, [&](int k) {
      try {
        inside[k] = critical_cycle_in_dividing_region(centers[k].param, centers[k].period) ? 1 : 0;
      } catch (const Error& e) {
        inside[k] = -1;
        why[k] = e.what();
      }
    });
    std::vector<CenterRecord> kept;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (inside[k] == 1) kept.push_back(centers[k]);
      if (inside[k] < 0 && issues) {
        issues->push_back("cubic center of period " + std::to_string(centers[k].period) +
                          " dropped, dividing rays unavailable: " + why[k]);
      }
    }
    centers = std::move(kept);
  }
  std::sort(centers.begin(), centers.end(), by_period_then_param);
  return centers;
}

void match_period(CenterCatalog& cat, int period, std::vector<bool>& m1_used,
                  int& orientation) {
  auto matched_pair = [&](std::size_t ic) { return cat.match[ic]; };
  auto claim = [&](int jc, int jm, const std::string& how) {
    if (cat.match[jc] >= 0 || m1_used[jm]) {
      cat.issues.push_back("period " + std::to_string(period) + ": conflicting match via " + how);
      return false;
    }
    cat.match[jc] = jm;
    m1_used[jm] = true;
    return true;
  };

  // Satellites: the k/q satellite of a matched parent of period p/q.
  for (std::size_t ic = 0; ic < cat.cubic.size(); ++ic) {
    const int im = matched_pair(ic);
    const int d = cat.cubic[ic].period;
    if (im < 0 || d >= period || period % d != 0) continue;
    const int q = period / d;
    for (int k = 1; k < q; ++k) {
      if (std::gcd(k, q) != 1) continue;
      const std::string how = "satellite " + std::to_string(k) + "/" + std::to_string(q) +
                              " of period-" + std::to_string(d) + " center";
      const Cx rho = 0.98 * std::polar(1.0, kTwoPi * k / q);
      int jc, jm;
      try {
        jc = nearest_center(cat.cubic, period, probe(cat.cubic[ic], rho));
        jm = nearest_center(cat.m1, period, b_of(probe(cat.m1[im], rho)));
      } catch (const Error& e) {
        cat.issues.push_back(how + ": root probe failed: " + e.what());
        continue;
      }
      if (jc == -2 || jm == -2) {
        cat.issues.push_back(how + ": ambiguous nearest center");
        continue;
      }
      if (jc < 0 || jm < 0) {
        cat.issues.push_back(how + ": no center of period " + std::to_string(period) + " found");
        continue;
      }
      if (claim(jc, jm, how) && d == 1 && q == 3 && k == 1) {
        orientation = side(cat.cubic[jc]) * side(cat.m1[jm]);
      }
    }
  }

  // Primitives: the remaining centers, on the symmetry axis ordered by
  // distance from the period-1 center, off it one per side.
  auto period_one = [](const std::vector<CenterRecord>& list) -> std::optional<Cx> {
    for (const auto& c : list)
      if (c.period == 1) return position(c);
    return std::nullopt;
  };
  const auto root_c = period_one(cat.cubic);
  const auto root_m = period_one(cat.m1);
  std::vector<int> axis_c, axis_m;
  std::vector<int> off_c[2], off_m[2];
  for (std::size_t i = 0; i < cat.cubic.size(); ++i) {
    if (cat.cubic[i].period != period || cat.match[i] >= 0) continue;
    if (on_axis(cat.cubic[i])) axis_c.push_back(static_cast<int>(i));
    else off_c[side(cat.cubic[i]) > 0].push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < cat.m1.size(); ++i) {
    if (cat.m1[i].period != period || m1_used[i]) continue;
    if (on_axis(cat.m1[i])) axis_m.push_back(static_cast<int>(i));
    else off_m[side(cat.m1[i]) > 0].push_back(static_cast<int>(i));
  }
  const std::string tag = "period " + std::to_string(period) + ": ";
  if (!axis_c.empty() || !axis_m.empty()) {
    if (axis_c.size() != axis_m.size() || !root_c || !root_m) {
      cat.issues.push_back(tag + "unequal numbers of primitive centers on the symmetry axis");
    } else {
      auto by_distance = [](const std::vector<CenterRecord>& list, Cx root) {
        return [&list, root](int x, int y) {
          return std::abs(position(list[x]) - root) < std::abs(position(list[y]) - root);
        };
      };
      std::sort(axis_c.begin(), axis_c.end(), by_distance(cat.cubic, *root_c));
      std::sort(axis_m.begin(), axis_m.end(), by_distance(cat.m1, *root_m));
      for (std::size_t k = 0; k < axis_c.size(); ++k) claim(axis_c[k], axis_m[k], "axis order");
    }
  }
  for (int s = 0; s < 2; ++s) {
    const auto& cs = off_c[s];
    if (cs.empty()) continue;
    if (orientation == 0) {
      cat.issues.push_back(tag + "off-axis primitive centers without a known orientation");
      continue;
    }
    const int cubic_side = s ? 1 : -1;
    const auto& ms = off_m[orientation * cubic_side > 0];
    if (cs.size() == 1 && ms.size() == 1) {
      claim(cs[0], ms[0], "side");
    } else {
      cat.issues.push_back(tag + std::to_string(cs.size()) + " cubic and " +
                           std::to_string(ms.size()) +
                           " M1 off-axis primitive centers on one side; not matched");
    }
  }
  // Whatever is left is unmatched.
  for (std::size_t i = 0; i < cat.cubic.size(); ++i) {
    if (cat.cubic[i].period == period && cat.match[i] < 0) {
      cat.issues.push_back(tag + "cubic center " + std::to_string(i) + " unmatched");
    }
  }
  for (std::size_t i = 0; i < cat.m1.size(); ++i) {
    if (cat.m1[i].period == period && !m1_used[i]) {
      cat.issues.push_back(tag + "M1 center " + std::to_string(i) + " unmatched");
    }
  }
}

}  // namespace

Cx designated_critical_point(Plane plane, Cx param) {
  return plane == Plane::CubicA ? cubic_critical_points(param).minus : Cx{-1.0, 0.0};
}

double center_residual(Plane plane, Cx param, int period) {
  const auto eq = center_equation(plane, param, period);
  return eq ? std::abs(eq->g) : std::numeric_limits<double>::infinity();
}

CenterRecord find_center(Plane plane, int period, Cx seed, const ToleranceSet& tol) {
  (void)tol;
  if (period < 1) throw Error(ErrorKind::InvalidArgument, "period must be >= 1");
  Cx p = seed;
  for (int it = 0; it < 100; ++it) {
    const auto eq = center_equation(plane, p, period);
    if (!eq || eq->dg == Cx{}) throw Error(ErrorKind::NewtonDiverged, "degenerate Newton step");
    const Cx step = eq->g / eq->dg;
    p -= step;
    if (!is_finite(p)) throw Error(ErrorKind::NewtonDiverged, "Newton iterate overflowed");
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(p))) break;
  }
  const double residual = center_residual(plane, p, period);
  if (!(residual < 1e-9)) {
    throw Error(ErrorKind::NewtonDiverged,
                "center Newton did not converge (residual " + std::to_string(residual) + ")");
  }
  const PlaneMap m{plane, p};
  const auto exact = exact_period(m, designated_critical_point(plane, p), period, 1e-6);
  if (exact && *exact < period) {
    throw Error(ErrorKind::PeriodCollapsed,
                "converged to a center of period " + std::to_string(*exact));
  }
  return CenterRecord{plane, p, period, residual};
}

std::pair<int, Cx> rho_p(Cx a, const ToleranceSet& tol) {
  const Budgets budgets;
  const Cycle c = detect_and_refine_cycle(FamilySlot::cubic(a), cubic_critical_points(a).minus,
                                          budgets.max_period, budgets.locus, tol);
  if (!(std::abs(c.multiplier) < 1.0)) {
    throw Error(ErrorKind::NoCycleFound, "critical orbit settles on a non-attracting cycle");
  }
  return {c.period, c.multiplier};
}

Cx rho_q(Cx A, int period, const ToleranceSet& tol) {
  const Budgets budgets;
  const Cycle c = detect_and_refine_cycle(FamilySlot::per_one(A), Cx{-1.0, 0.0},
                                          budgets.max_period, budgets.locus, tol);
  if (!(std::abs(c.multiplier) < 1.0)) {
    throw Error(ErrorKind::NoCycleFound, "critical orbit settles on a non-attracting cycle");
  }
  if (c.period != period) {
    throw Error(ErrorKind::NoCycleFound, "attracting cycle has period " +
                                             std::to_string(c.period) + ", expected " +
                                             std::to_string(period));
  }
  return c.multiplier;
}

int continue_multiplier(Plane plane, int period, CycleState& state, Cx from, Cx to, int steps) {
  if (steps < 1 || period < 1) throw Error(ErrorKind::InvalidArgument, "steps and period must be >= 1");
  const double min_dt = std::ldexp(1.0, -10);
  double t = 0.0;
  double dt = 1.0 / steps;
  double speed = -1.0;  // |d param / dt| of the last accepted step
  int taken = 0;
  while (t < 1.0) {
    const double tn = std::min(1.0, t + dt);
    CycleState trial = state;
    bool ok = track_newton(plane, period, from + tn * (to - from), trial);
    if (ok) {
      const PlaneMap m{plane, trial.param};
      const auto exact = exact_period(m, trial.z, period, 1e-9);
      ok = exact && *exact == period;
    }
    const double move = std::abs(trial.param - state.param) / (tn - t);
    if (ok && speed >= 0.0) ok = move <= 8.0 * speed + 1e-9 / (tn - t);
    if (!ok) {
      dt *= 0.5;
      if (dt < min_dt) {
        throw Error(ErrorKind::ContinuationStalled,
                    "multiplier continuation stalled at t = " + std::to_string(t));
      }
      continue;
    }
    speed = move;
    state = trial;
    t = tn;
    ++taken;
    dt = std::min(2.0 * dt, 1.0 / steps);
  }
  return taken;
}

bool critical_cycle_in_dividing_region(Cx a, int period) {
  const Ray r0 = trace_dynamical_ray(a, Turns::rational(0, 1), 1e-4, 4.0);
  const Ray r1 = trace_dynamical_ray(a, Turns::rational(1, 2), 1e-4, 4.0);
  const std::vector<Cx> half = ray_wedge(r0, r1, Cx{});
  const CubicMap f{a};
  Cx z = cubic_critical_points(a).minus;
  const bool side = point_in_polygon(half, z);
  for (int k = 1; k < period; ++k) {
    z = f(z);
    if (point_in_polygon(half, z) != side) return false;
  }
  return true;
}

int CenterCatalog::find_cubic(Cx a, int period) const {
  for (std::size_t i = 0; i < cubic.size(); ++i) {
    if (cubic[i].period == period &&
        std::abs(cubic[i].param - a) < 1e-7 * std::max(1.0, std::abs(a))) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::vector<Cx> default_wedge() {
  const Ray first = trace_parameter_ray(Turns::rational(1, 6), 1e-4, 4.0);
  const Ray second = trace_parameter_ray(Turns::rational(2, 6), 1e-4, 4.0);
  return ray_wedge(first, second, Cx{});
}

CenterCatalog build_catalog(int max_period, const std::vector<Cx>& wedge,
                            const ToleranceSet& tol, const ScanOptions& opt) {
  if (max_period < 1) throw Error(ErrorKind::InvalidArgument, "max_period must be >= 1");
  if (opt.resolution < 3) throw Error(ErrorKind::InvalidArgument, "scan resolution must be >= 3");
  CenterCatalog cat;
  cat.max_period = max_period;
  cat.cubic = enumerate_centers(Plane::CubicA, max_period, wedge, tol, opt, &cat.issues);
  cat.m1 = enumerate_centers(Plane::PerOneA, max_period, wedge, tol, opt, &cat.issues);
  cat.match.assign(cat.cubic.size(), -1);

  std::vector<bool> m1_used(cat.m1.size(), false);
  int orientation = 0;
  for (int p = 1; p <= max_period; ++p) {
    if (p == 1) {
      std::vector<int> c1, m1;
      for (std::size_t i = 0; i < cat.cubic.size(); ++i)
        if (cat.cubic[i].period == 1) c1.push_back(static_cast<int>(i));
      for (std::size_t i = 0; i < cat.m1.size(); ++i)
        if (cat.m1[i].period == 1) m1.push_back(static_cast<int>(i));
      if (c1.size() == 1 && m1.size() == 1) {
        cat.match[c1[0]] = m1[0];
        m1_used[m1[0]] = true;
      } else {
        cat.issues.push_back("period 1: expected one center per plane, found " +
                             std::to_string(c1.size()) + " and " + std::to_string(m1.size()));
      }
      continue;
    }
    match_period(cat, p, m1_used, orientation);
  }
  return cat;
}

ChiRecord chi(Cx a, const ToleranceSet& tol, const CenterCatalog* catalog) {
  ChiRecord rec;
  rec.a = a;
  // The lower wedge is the image of the upper one under a -> -a, which
  // conjugates C_a to C_{-a} and swaps nothing else.
  const Cx a_up = (a.imag() < 0.0 || (a.imag() == 0.0 && a.real() < 0.0)) ? -a : a;

  const Budgets budgets;
  const Cycle cycle = detect_and_refine_cycle(FamilySlot::cubic(a_up),
                                              cubic_critical_points(a_up).minus,
                                              budgets.max_period, budgets.locus, tol);
  const Cx rho = cycle.multiplier;
  if (!(std::abs(rho) < 1.0)) {
    throw Error(ErrorKind::NoCycleFound, "critical orbit settles on a non-attracting cycle");
  }
  if (std::abs(rho) > 0.98) {
    throw Error(ErrorKind::ContinuationStalled,
                "multiplier modulus above 0.98, too close to the component boundary");
  }
  rec.period = cycle.period;
  rec.rho_p = rho;

  CycleState cubic_state{cycle.points.front(), a_up};
  int steps = continue_multiplier(Plane::CubicA, cycle.period, cubic_state, rho, Cx{});
  const CenterRecord center = find_center(Plane::CubicA, cycle.period, cubic_state.param, tol);
  if (std::abs(center.param - cubic_state.param) > 1e-6) {
    throw Error(ErrorKind::ContinuationStalled, "continuation did not end at a center");
  }
  rec.a_center = center.param;

  std::optional<CenterCatalog> own;
  Cx A_center;
  if (cycle.period == 1) {
    A_center = find_center(Plane::PerOneA, 1, Cx{1.0, 0.0}, tol).param;
  } else {
    if (!catalog || catalog->max_period < cycle.period) {
      own = build_catalog(cycle.period, default_wedge(), tol);
      catalog = &*own;
    }
    const int idx = catalog->find_cubic(center.param, cycle.period);
    if (idx < 0) {
      throw Error(ErrorKind::AmbiguousCenterMatch, "component center is not in the catalog");
    }
    if (catalog->match[idx] < 0) {
      throw Error(ErrorKind::AmbiguousCenterMatch,
                  "no unambiguous M1 center matches this component");
    }
    A_center = catalog->m1[catalog->match[idx]].param;
  }
  rec.A_center = A_center;

  CycleState m1_state{Cx{-1.0, 0.0}, A_center};
  steps += continue_multiplier(Plane::PerOneA, cycle.period, m1_state, Cx{}, rho);
  rec.path_steps = steps;
  rec.A_matched = m1_state.param;

  const Cx rq = rho_q(rec.A_matched, cycle.period, tol);
  rec.match_residual = std::abs(rq - rho);
  if (!(rec.match_residual < tol.match_tol)) {
    throw Error(ErrorKind::ContinuationStalled,
                "matched multiplier off by " + std::to_string(rec.match_residual));
  }
  rec.B = b_of(rec.A_matched);
  if (b_of(-rec.A_matched) != rec.B) {
    throw Error(ErrorKind::BranchAmbiguity, "B differs between A and -A");
  }
  return rec;
}

CorrespondenceReport correspondence_report(int max_period, const std::vector<Cx>& wedge,
                                           const ToleranceSet& tol, const ScanOptions& opt) {
  if (max_period < 1 || max_period > 6) {
    throw Error(ErrorKind::InvalidArgument, "max_period must lie in [1, 6]");
  }
  CorrespondenceReport rep;
  rep.max_period = max_period;
  rep.catalog = build_catalog(max_period, wedge, tol, opt);
  rep.issues = rep.catalog.issues;
  const auto& cat = rep.catalog;

  // Two chi samples per cubic center: the center and an interior point.
  const int n = static_cast<int>(cat.cubic.size());
  std::vector<std::optional<ChiRecord>> recs(2 * n);
  std::vector<std::string> errors(2 * n);
  parallel_for(2 * n, opt.threads, [&](int k) {
    const CenterRecord& c = cat.cubic[k / 2];
    try {
      Cx a = c.param;
      if (k % 2 == 1) a = probe(c, kProbeMultiplier);
      recs[k] = chi(a, tol, &cat);
    } catch (const Error& e) {
      errors[k] = e.what();
    }
  });

  std::vector<bool> period_ok(max_period + 1, true);
  for (int k = 0; k < 2 * n; ++k) {
    const CenterRecord& c = cat.cubic[k / 2];
    const bool ok = recs[k] && recs[k]->period == c.period &&
                    recs[k]->match_residual < tol.match_tol && cat.match[k / 2] >= 0 &&
                    recs[k]->A_center == cat.m1[cat.match[k / 2]].param;
    if (recs[k]) {
      rep.records.push_back(*recs[k]);
      rep.max_match_residual = std::max(rep.max_match_residual, recs[k]->match_residual);
    } else {
      rep.issues.push_back("chi at cubic center " + std::to_string(k / 2) +
                           (k % 2 ? " (interior probe)" : "") + ": " + errors[k]);
    }
    if (!ok) period_ok[c.period] = false;
  }
  std::sort(rep.records.begin(), rep.records.end(), [](const ChiRecord& x, const ChiRecord& y) {
    if (x.period != y.period) return x.period < y.period;
    if (x.a.real() != y.a.real()) return x.a.real() < y.a.real();
    return x.a.imag() < y.a.imag();
  });

  rep.bijective = true;
  for (int p = 1; p <= max_period; ++p) {
    PeriodSummary s;
    s.period = p;
    std::vector<int> hit(cat.m1.size(), 0);
    bool all_matched = true;
    for (std::size_t i = 0; i < cat.cubic.size(); ++i) {
      if (cat.cubic[i].period != p) continue;
      ++s.count_cubic;
      if (cat.match[i] < 0) all_matched = false;
      else ++hit[cat.match[i]];
    }
    bool onto = true;
    for (std::size_t j = 0; j < cat.m1.size(); ++j) {
      if (cat.m1[j].period != p) continue;
      ++s.count_m1;
      if (hit[j] != 1) onto = false;
    }
    s.bijective = s.count_cubic == s.count_m1 && all_matched && onto && period_ok[p];
    rep.bijective = rep.bijective && s.bijective;
    rep.summary.push_back(s);
  }
  return rep;
}

namespace {

using Json = nlohmann::ordered_json;

Json cx_json(Cx z) { return Json::array({z.real(), z.imag()}); }

Json center_object(const CenterRecord& c) {
  Json j;
  j["plane"] = to_string(c.plane);
  j["param"] = cx_json(c.param);
  j["period"] = c.period;
  j["residual"] = c.residual;
  if (c.plane == Plane::PerOneA) j["B"] = cx_json(b_of(c.param));
  return j;
}

Json chi_object(const ChiRecord& r) {
  Json j;
  j["a"] = cx_json(r.a);
  j["period"] = r.period;
  j["rho_p"] = cx_json(r.rho_p);
  j["A_matched"] = cx_json(r.A_matched);
  j["B"] = cx_json(r.B);
  j["match_residual"] = r.match_residual;
  j["path_steps"] = r.path_steps;
  j["a_center"] = cx_json(r.a_center);
  j["A_center"] = cx_json(r.A_center);
  return j;
}

Json catalog_object(const CenterCatalog& cat) {
  Json j;
  j["max_period"] = cat.max_period;
  Json centers = Json::array();
  for (const auto& c : cat.cubic) centers.push_back(center_object(c));
  for (const auto& c : cat.m1) centers.push_back(center_object(c));
  j["centers"] = centers;
  Json pairs = Json::array();
  for (std::size_t i = 0; i < cat.cubic.size(); ++i) {
    const int m = cat.match[i];
    Json p;
    p["period"] = cat.cubic[i].period;
    p["a"] = cx_json(cat.cubic[i].param);
    if (m >= 0) {
      p["A"] = cx_json(cat.m1[m].param);
      p["B"] = cx_json(b_of(cat.m1[m].param));
    } else {
      p["A"] = nullptr;
      p["B"] = nullptr;
    }
    pairs.push_back(p);
  }
  j["pairs"] = pairs;
  j["issues"] = cat.issues;
  return j;
}

}  // namespace

std::string center_json(const CenterRecord& c) { return center_object(c).dump(2); }

std::string chi_json(const ChiRecord& r) { return chi_object(r).dump(2); }

std::string catalog_json(const CenterCatalog& cat) { return catalog_object(cat).dump(2); }

std::string report_json(const CorrespondenceReport& rep) {
  Json j = catalog_object(rep.catalog);
  j["max_period"] = rep.max_period;
  Json recs = Json::array();
  for (const auto& r : rep.records) recs.push_back(chi_object(r));
  j["chi"] = recs;
  Json summary = Json::object();
  for (const auto& s : rep.summary) {
    summary[std::to_string(s.period)] = {{"count_cubic", s.count_cubic},
                                         {"count_m1", s.count_m1},
                                         {"bijective", s.bijective}};
  }
  j["summary"] = summary;
  j["bijective"] = rep.bijective;
  j["max_match_residual"] = rep.max_match_residual;
  j["issues"] = rep.issues;
  return j.dump(2);
}

}  // namespace plike
