#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "plike/boettcher.hpp"
#include "plike/error.hpp"
#include "plike/family.hpp"
#include "plike/orbit.hpp"

using namespace plike;

namespace {

Cx cubic(Cx a, Cx z) { return z + a * z * z + z * z * z; }

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

}  // namespace

TEST_CASE("angles in turns") {
  const Turns sixth = Turns::parse("1/6");
  CHECK(sixth.exact());
  CHECK(sixth.tripled() == Turns::rational(1, 2));
  CHECK(sixth.tripled(5) == Turns::rational(1, 2));
  CHECK(Turns::parse("2/6") == Turns::rational(1, 3));
  CHECK(Turns::rational(1, 3).tripled() == Turns::rational(0, 1));
  CHECK(Turns::rational(-1, 6) == Turns::rational(5, 6));
  CHECK(sixth.plus_half() == Turns::rational(2, 3));
  CHECK(Turns::rational(1, 3).plus_half() == Turns::rational(5, 6));
  CHECK(sixth.negated() == Turns::rational(5, 6));
  CHECK(Turns::rational(1, 7).tripled(40) == Turns::rational(1, 7).tripled(40 % 6));
  CHECK(Turns::parse("0.25").value() == 0.25);
  CHECK_FALSE(Turns::parse("0.25").exact());
  CHECK(Turns::parse("1.75").value() == 0.75);
  CHECK(Turns::parse("3/6").to_string() == "1/2");
  CHECK(kind_of([] { Turns::parse("1/0"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Turns::parse("abc"); }) == ErrorKind::InvalidArgument);

  const auto fixed = angles_fixed_by_tripling(60);
  REQUIRE(fixed.size() == 2);
  CHECK(fixed[0] == Turns::rational(0, 1));
  CHECK(fixed[1] == Turns::rational(1, 2));
}

TEST_CASE("green potential") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-3, 3);
  int escaping = 0;
  for (int i = 0; i < 500; ++i) {
    const Cx a(d(rng) * 0.7, d(rng) * 0.7);
    const Cx z(d(rng), d(rng));
    const double g = green_potential(a, z);
    if (g <= 0) continue;
    ++escaping;
    CHECK(std::abs(green_potential(a, cubic(a, z)) - 3 * g) <= 1e-9 * 3 * g);
  }
  CHECK(escaping > 100);
  CHECK(std::abs(green_potential(0.0, 1e10) - std::log(1e10)) < 1e-3 * std::log(1e10));
  CHECK(green_potential(0.0, cubic_critical_points(0.0).plus) == 0.0);
}

TEST_CASE("Boettcher coordinate") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int i = 0; i < 300; ++i) {
    const Cx a(2 * d(rng), 2 * d(rng));
    const double r = cubic_escape_radius(a) * (1.01 + std::abs(d(rng)));
    const Cx z = std::polar(r, 3.2 * d(rng));
    const Cx phi = boettcher(a, z);
    CHECK(std::abs(std::abs(phi) - std::exp(green_potential(a, z))) <= 1e-9 * std::abs(phi));
    const Cx phi3 = phi * phi * phi;
    CHECK(std::abs(boettcher(a, cubic(a, z)) - phi3) <= 1e-8 * std::abs(phi3));
  }
  for (double x : {2.5, 3.0, 10.0, 1e3}) {
    const Cx phi = boettcher(0.0, x);
    CHECK(phi.imag() == 0.0);
    CHECK(phi.real() > 0.0);
  }
  // Tangent to the identity with phi(z) = z + a/3 + O(1/z).
  const Cx a(0.4, -1.2);
  const Cx big(3e5, -1e5);
  CHECK(std::abs(boettcher(a, big) - big - a / 3.0) < 1e-4);
  CHECK(kind_of([] { boettcher(0.0, 0.0, 100); }) == ErrorKind::NotEscaped);
}

TEST_CASE("co-critical point") {
  CHECK(std::abs(cocritical(2.0)) < 1e-15);
  CHECK(cubic(2.0, 0.0) == cubic(2.0, -1.0));
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int i = 0; i < 500; ++i) {
    const Cx a(d(rng), d(rng));
    const Cx ct = cocritical(a);
    CHECK(std::abs(cocritical(-a) + ct) < 1e-13);
    const Cx v = cubic(a, cubic_critical_points(a).minus);
    CHECK(std::abs(cubic(a, ct) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
    if (std::abs(a * a - 3.0) > 0.1 && std::abs(a.imag()) > 0.05) {
      const double h = 1e-6;
      const Cx fd = (cocritical(a + h) - cocritical(a - h)) / (2 * h);
      CHECK(std::abs(fd - cocritical_derivative(a)) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("dynamical ray of angle 0 for a = 2 stays on the positive axis") {
  const Ray ray = trace_dynamical_ray(2.0, Turns::rational(0, 1), 1e-3, 5.0);
  REQUIRE_FALSE(ray.samples.empty());
  for (const auto& s : ray.samples) {
    CHECK(std::abs(s.point.imag()) <= 1e-12 * std::abs(s.point));
    CHECK(s.point.real() > 0.0);
  }
}

TEST_CASE("dynamical rays follow their potential") {
  for (Cx a : {Cx(0, 1), Cx(0.3, 1.1), Cx(-1, 0.5)}) {
    for (const char* angle : {"0", "1/2", "1/3", "0.1234"}) {
      const Ray ray = trace_dynamical_ray(a, Turns::parse(angle), 1e-3, 4.0);
      REQUIRE(ray.samples.size() > 2);
      CHECK(ray.samples.front().t == 4.0);
      CHECK(ray.samples.back().t == 1e-3);
      CHECK_FALSE(ray.landing_estimate.has_value());
      for (std::size_t k = 0; k < ray.samples.size(); ++k) {
        const auto& s = ray.samples[k];
        CHECK(std::abs(green_potential(a, s.point, 20000) - s.t) <= 1e-6 * s.t);
        if (k > 0) CHECK(s.t < ray.samples[k - 1].t);
      }
    }
  }
}

TEST_CASE("dynamical rays respect complex conjugation") {
  const Cx a(0.3, 1.1);
  for (const char* angle : {"1/3", "0.2", "1/7"}) {
    const Turns th = Turns::parse(angle);
    const Ray r1 = trace_dynamical_ray(a, th, 1e-3, 3.0);
    const Ray r2 = trace_dynamical_ray(std::conj(a), th.negated(), 1e-3, 3.0);
    REQUIRE(r1.samples.size() == r2.samples.size());
    for (std::size_t k = 0; k < r1.samples.size(); ++k) {
      CHECK(std::abs(r1.samples[k].point - std::conj(r2.samples[k].point)) < 1e-9);
    }
  }
}

TEST_CASE("parameter rays") {
  const Ray r1 = trace_parameter_ray(Turns::rational(1, 6), 1e-3, 5.0);
  const Ray r2 = trace_parameter_ray(Turns::rational(1, 6).plus_half(), 1e-3, 5.0);
  REQUIRE(r1.samples.size() == r2.samples.size());
  REQUIRE(r1.landing_estimate.has_value());
  for (std::size_t k = 0; k < r1.samples.size(); ++k) {
    CHECK(std::abs(r1.samples[k].point + r2.samples[k].point) < 1e-8);
    const Cx a = r1.samples[k].point;
    const double t = r1.samples[k].t;
    CHECK(std::abs(green_potential(a, cocritical(a), 20000) - t) <= 1e-6 * t);
  }
  // Far out the ray points along its angle.
  CHECK(std::abs(std::arg(r1.samples.front().point) - kTwoPi / 6) < 0.05);
}

TEST_CASE("parameter derivative matches finite differences") {
  // The tracer's Newton slope is d/da [C_a^n(c(a)) + a/3]; compare with
  // central differences of the same expression.
  for (Cx a : {Cx(1.0, 1.3), Cx(-0.5, 2.0), Cx(2.5, 0.4)}) {
    for (int n : {0, 1, 2, 3}) {
      auto value = [&](Cx b) {
        Cx z = cocritical(b);
        for (int k = 0; k < n; ++k) z = cubic(b, z);
        return z + b / 3.0;
      };
      Cx z = cocritical(a);
      Cx dz = cocritical_derivative(a);
      for (int k = 0; k < n; ++k) {
        dz = derivative(FamilySlot::cubic(a), z) * dz + z * z;
        z = cubic(a, z);
      }
      const double h = 1e-7;
      const Cx fd = (value(a + h) - value(a - h)) / (2 * h);
      CHECK(std::abs(fd - (dz + 1.0 / 3.0)) < 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("the wedge between parameter rays 1/6 and 2/6 contains a = i") {
  const Ray r1 = trace_parameter_ray(Turns::rational(1, 6), 1e-4, 5.0);
  const Ray r2 = trace_parameter_ray(Turns::rational(2, 6), 1e-4, 5.0);
  const auto wedge = ray_wedge(r1, r2);
  CHECK(point_in_polygon(wedge, Cx(0, 1)));
  CHECK_FALSE(point_in_polygon(wedge, Cx(0, -1)));
  CHECK_FALSE(point_in_polygon(wedge, Cx(2, 0)));
}

TEST_CASE("ray CSV export") {
  Ray ray;
  ray.kind = RayKind::Parameter;
  ray.angle = Turns::rational(1, 6);
  ray.samples = {{2.0, Cx(1, 2)}, {1.0, Cx(0.5, -0.25)}};
  std::ostringstream out;
  write_ray_csv(out, ray);
  CHECK(out.str() == "# parameter ray angle=1/6\nt,re,im\n2,1,2\n1,0.5,-0.25\n");
}

TEST_CASE("tracer input validation") {
  CHECK(kind_of([] { trace_dynamical_ray(0.0, Turns{}, 1.0, 0.5); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { trace_parameter_ray(Turns{}, 0.0, 1.0); }) == ErrorKind::InvalidArgument);
}
