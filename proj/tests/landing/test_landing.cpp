// Landing of rays at the parabolic point, checked at potential 1e-4 with the
// documented 0.05 tolerance. Landing at a parabolic point is slow, so these
// are kept apart from the unit tests.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "plike/boettcher.hpp"
#include "plike/cli.hpp"

using namespace plike;

TEST_CASE("fixed dynamical rays of C_i land at the parabolic point") {
  for (const char* angle : {"0", "1/2"}) {
    const Ray ray = trace_dynamical_ray(Cx(0, 1), Turns::parse(angle), 1e-4, 10.0);
    REQUIRE(ray.landing_estimate.has_value());
    INFO("angle " << std::string(angle) << " distance " << std::abs(*ray.landing_estimate));
    CHECK(std::abs(*ray.landing_estimate) < 0.05);
  }
}

TEST_CASE("parameter rays 1/6 and 2/6 land at a = 0") {
  for (const char* angle : {"1/6", "2/6"}) {
    const Ray ray = trace_parameter_ray(Turns::parse(angle), 1e-4, 10.0);
    REQUIRE(ray.landing_estimate.has_value());
    INFO("angle " << std::string(angle) << " distance " << std::abs(*ray.landing_estimate));
    CHECK(std::abs(*ray.landing_estimate) < 0.05);
  }
}

TEST_CASE("trace-param-ray reaches the root from the command line") {
  const char* argv[] = {"plike", "trace-param-ray", "--angle", "1/6", "--tmin", "1e-4", "--out",
                        "landing_param_ray"};
  std::ostringstream out, err;
  REQUIRE(run_cli(8, argv, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  INFO("last modulus " << j["last_modulus"].get<double>());
  CHECK(j["last_modulus"].get<double>() < 0.05);
}
