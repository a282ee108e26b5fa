#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "plike/error.hpp"
#include "plike/family.hpp"
#include "plike/straightening.hpp"

using namespace plike;

namespace {

template <class Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

Cx per_one(Cx A, Cx z) { return z + 1.0 / z + A; }
Cx cubic_map(Cx a, Cx z) { return z + a * z * z + z * z * z; }

// Samples of the period-1 component near i: a = sqrt(rho - 1) with
// |rho| < 0.9, branch continuous from i.
std::vector<Cx> period_one_samples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 0.85), angle(0.0, 6.283185307179586);
  std::vector<Cx> out;
  while (static_cast<int>(out.size()) < count) {
    const Cx rho = std::polar(radius(rng), angle(rng));
    Cx a = std::sqrt(rho - 1.0);
    if (a.imag() < 0.0) a = -a;
    out.push_back(a);
  }
  return out;
}

const CenterCatalog& shared_catalog() {
  static const CenterCatalog cat = [] {
    ScanOptions opt;
    opt.resolution = 256;
    return build_catalog(4, default_wedge(), ToleranceSet{}, opt);
  }();
  return cat;
}

}  // namespace

TEST_CASE("center anchors") {
  const ToleranceSet tol;
  const CenterRecord one = find_center(Plane::PerOneA, 1, 0.9, tol);
  CHECK(std::abs(one.param - 1.0) < 1e-12);
  CHECK(one.residual < 1e-9);

  const CenterRecord two = find_center(Plane::PerOneA, 2, 1.4, tol);
  CHECK(std::abs(two.param - 1.5) < 1e-12);
  CHECK(std::abs(1.0 - two.param * two.param - Cx{-1.25, 0.0}) < 1e-11);
  // Direct iteration: -1 -> -1/2 -> -1.
  const Cx z1 = per_one(two.param, -1.0);
  CHECK(std::abs(z1 + 0.5) < 1e-12);
  CHECK(std::abs(per_one(two.param, z1) + 1.0) < 1e-12);

  const CenterRecord ci = find_center(Plane::CubicA, 1, Cx{0.0, 0.9}, tol);
  CHECK(std::abs(ci.param - Cx{0.0, 1.0}) < 1e-12);
  CHECK(ci.residual < 1e-9);
  // c_-(i) = -i is fixed.
  const Cx c = cubic_critical_points(ci.param).minus;
  CHECK(std::abs(cubic_map(ci.param, c) - c) < 1e-12);
}

TEST_CASE("center failures") {
  const ToleranceSet tol;
  // Seeded next to A = 1, the period-2 equation has the period-1 root.
  CHECK(kind_of([&] { find_center(Plane::PerOneA, 2, 0.98, tol); }) ==
        ErrorKind::PeriodCollapsed);
  CHECK(kind_of([&] { find_center(Plane::PerOneA, 0, 1.0, tol); }) ==
        ErrorKind::InvalidArgument);
  // A = 2 sends -1 onto the pole 0.
  CHECK(kind_of([&] { find_center(Plane::PerOneA, 2, 2.0, tol); }) ==
        ErrorKind::NewtonDiverged);
}

TEST_CASE("multiplier maps") {
  const ToleranceSet tol;
  const auto [p0, m0] = rho_p(Cx{0.0, 1.0}, tol);
  CHECK(p0 == 1);
  CHECK(std::abs(m0) < 1e-10);

  const Cx a{0.2, 0.9};
  const auto [p1, m1] = rho_p(a, tol);
  CHECK(p1 == 1);
  CHECK(std::abs(m1 - (1.0 + a * a)) < 1e-10);

  CHECK(kind_of([&] { rho_p(3.0, tol); }) == ErrorKind::NoCycleFound);

  CHECK(std::abs(rho_q(1.0, 1, tol)) < 1e-10);
  CHECK(std::abs(rho_q(1.5, 2, tol)) < 1e-10);
  CHECK(kind_of([&] { rho_q(1.5, 1, tol); }) == ErrorKind::NoCycleFound);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.0, 0.85), t(0.0, 6.283185307179586);
  for (int k = 0; k < 30; ++k) {
    const Cx B = std::polar(r(rng), t(rng));
    const Cx A = std::sqrt(1.0 - B);
    CHECK(std::abs(rho_q(A, 1, tol) - (1.0 - A * A)) < 1e-10);
  }
}

TEST_CASE("rho_q is injective on the period-1 component") {
  const ToleranceSet tol;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.0, 0.85), t(0.0, 6.283185307179586);
  std::vector<Cx> As, rhos;
  for (int k = 0; k < 20; ++k) {
    const Cx A = std::sqrt(1.0 - std::polar(r(rng), t(rng)));
    As.push_back(A);
    rhos.push_back(rho_q(A, 1, tol));
  }
  for (int i = 0; i < 20; ++i) {
    for (int j = i + 1; j < 20; ++j) {
      if (std::abs(As[i] - As[j]) > 1e-3) CHECK(std::abs(rhos[i] - rhos[j]) > 1e-9);
    }
  }
}

TEST_CASE("multiplier continuation") {
  // Period 1 in the A-plane: the fixed point -1/A has multiplier 1 - A^2.
  CycleState s{-1.0, 1.0};
  const Cx target{0.3, -0.4};
  const int steps = continue_multiplier(Plane::PerOneA, 1, s, Cx{}, target);
  CHECK(steps >= 32);
  CHECK(std::abs(1.0 - s.param * s.param - target) < 1e-12);
  CHECK(std::abs(s.z + 1.0 / s.param) < 1e-12);

  // Cubic period 2 from its center to an interior multiplier and back.
  const CenterRecord c2 = find_center(Plane::CubicA, 2, Cx{0.0, 1.5}, ToleranceSet{});
  CycleState t{designated_critical_point(Plane::CubicA, c2.param), c2.param};
  continue_multiplier(Plane::CubicA, 2, t, Cx{}, Cx{0.5, 0.2});
  const Cx mult = derivative(FamilySlot::cubic(t.param), t.z) *
                  derivative(FamilySlot::cubic(t.param), cubic_map(t.param, t.z));
  CHECK(std::abs(mult - Cx{0.5, 0.2}) < 1e-10);
  continue_multiplier(Plane::CubicA, 2, t, Cx{0.5, 0.2}, Cx{});
  CHECK(std::abs(t.param - c2.param) < 1e-10);

  CHECK(kind_of([&] {
          CycleState u{-1.0, 1.0};
          continue_multiplier(Plane::PerOneA, 1, u, Cx{}, 0.5, 0);
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("chi on the period-1 component") {
  const ToleranceSet tol;
  const ChiRecord at_i = chi(Cx{0.0, 1.0}, tol);
  CHECK(at_i.period == 1);
  CHECK(std::abs(at_i.B) < 1e-12);
  CHECK(at_i.match_residual < 1e-8);

  for (Cx a : period_one_samples(20, 3)) {
    const ChiRecord r = chi(a, tol);
    CAPTURE(a);
    CHECK(r.period == 1);
    CHECK(std::abs(r.B - (1.0 + a * a)) < 1e-6);
    CHECK(std::abs(r.rho_p - (1.0 + a * a)) < 1e-10);
    CHECK(r.match_residual < 1e-8);
    CHECK(std::abs(r.a_center - Cx{0.0, 1.0}) < 1e-10);
    CHECK(1.0 - (-r.A_matched) * (-r.A_matched) == r.B);
  }
}

TEST_CASE("chi is invariant under a -> -a") {
  const ToleranceSet tol;
  for (Cx a : period_one_samples(8, 9)) {
    const ChiRecord up = chi(a, tol);
    const ChiRecord down = chi(-a, tol);
    CHECK(down.a == -a);
    CHECK(up.B == down.B);
    CHECK(up.period == down.period);
  }
  const auto& cat = shared_catalog();
  for (const auto& c : cat.cubic) {
    if (c.period != 3) continue;
    const ChiRecord up = chi(c.param, tol, &cat);
    const ChiRecord down = chi(-c.param, tol, &cat);
    CHECK(up.B == down.B);
  }
}

TEST_CASE("chi errors") {
  const ToleranceSet tol;
  CHECK(kind_of([&] { chi(3.0, tol); }) == ErrorKind::NoCycleFound);
  // 1 + a^2 = 0.99: hyperbolic but beyond the continuation limit.
  const Cx a = std::sqrt(Cx{0.99, 0.0} - 1.0);
  CHECK(kind_of([&] { chi(a, tol); }) == ErrorKind::ContinuationStalled);
}

TEST_CASE("center catalog and pairing") {
  const auto& cat = shared_catalog();
  const int expected[] = {0, 1, 1, 3, 6};
  for (int p = 1; p <= 4; ++p) {
    int nc = 0, nm = 0;
    for (const auto& c : cat.cubic) nc += c.period == p;
    for (const auto& c : cat.m1) nm += c.period == p;
    CAPTURE(p);
    CHECK(nc == expected[p]);
    CHECK(nm == expected[p]);
  }
  CHECK(cat.issues.empty());
  for (const auto& c : cat.cubic) {
    CHECK(center_residual(Plane::CubicA, c.param, c.period) < 1e-9);
    CHECK(c.param.imag() > 0.0);
    CHECK(critical_cycle_in_dividing_region(c.param, c.period));
  }
  for (const auto& c : cat.m1) CHECK(center_residual(Plane::PerOneA, c.param, c.period) < 1e-9);
  std::vector<int> seen(cat.m1.size(), 0);
  for (std::size_t i = 0; i < cat.cubic.size(); ++i) {
    REQUIRE(cat.match[i] >= 0);
    CHECK(cat.m1[cat.match[i]].period == cat.cubic[i].period);
    ++seen[cat.match[i]];
  }
  for (int s : seen) CHECK(s == 1);

  // Period 1 and 2 closed forms.
  CHECK(std::abs(cat.cubic[0].param - Cx{0.0, 1.0}) < 1e-12);
  CHECK(std::abs(cat.m1[0].param - 1.0) < 1e-12);
  CHECK(std::abs(cat.m1[1].param - 1.5) < 1e-12);

  // The 1/3 satellite hangs off the period-1 component at 1 + a^2 =
  // e^{2 pi i/3}, to the right of the axis; its partner has Im B > 0.
  const int sat = cat.find_cubic(cat.cubic[4].param, 3);
  REQUIRE(sat == 4);
  CHECK(cat.cubic[4].param.real() > 0.0);
  const Cx A = cat.m1[cat.match[4]].param;
  CHECK((1.0 - A * A).imag() > 0.0);
}

TEST_CASE("chi matches multipliers inside higher-period components") {
  const ToleranceSet tol;
  const auto& cat = shared_catalog();
  for (const auto& c : cat.cubic) {
    if (c.period < 2) continue;
    CycleState s{designated_critical_point(Plane::CubicA, c.param), c.param};
    continue_multiplier(Plane::CubicA, c.period, s, Cx{}, Cx{0.4, -0.3});
    const ChiRecord r = chi(s.param, tol, &cat);
    CAPTURE(c.param);
    CHECK(r.period == c.period);
    CHECK(std::abs(r.rho_p - Cx{0.4, -0.3}) < 1e-8);
    CHECK(r.match_residual < 1e-8);
    CHECK(std::abs(r.a_center - c.param) < 1e-9);
  }
}

TEST_CASE("correspondence report") {
  ScanOptions opt;
  opt.resolution = 256;
  const CorrespondenceReport rep = correspondence_report(3, default_wedge(), ToleranceSet{}, opt);
  CHECK(rep.bijective);
  CHECK(rep.issues.empty());
  REQUIRE(rep.summary.size() == 3);
  CHECK(rep.summary[0].count_cubic == 1);
  CHECK(rep.summary[0].count_m1 == 1);
  CHECK(rep.records.size() == 2 * rep.catalog.cubic.size());
  CHECK(rep.max_match_residual < 1e-8);
  for (std::size_t k = 1; k < rep.records.size(); ++k) {
    CHECK(rep.records[k - 1].period <= rep.records[k].period);
  }

  const auto j = nlohmann::json::parse(report_json(rep));
  CHECK(j["bijective"] == true);
  CHECK(j["summary"]["1"]["count_cubic"] == 1);
  CHECK(j["summary"]["3"]["count_m1"] == 3);
  CHECK(j["centers"].size() == rep.catalog.cubic.size() + rep.catalog.m1.size());
  CHECK(j["chi"].size() == rep.records.size());
  CHECK(j["chi"][0].contains("match_residual"));

  CHECK(kind_of([&] { correspondence_report(7, default_wedge(), ToleranceSet{}, opt); }) ==
        ErrorKind::InvalidArgument);
}
