#include "plike/tolerance.hpp"

#include <cstdio>

#include "plike/error.hpp"

namespace plike {

void ToleranceSet::validate() const {
  const double fields[] = {cycle_detect, cycle_refine, indifferent_margin,
                           fatou_tol,    ray_step_ratio, match_tol};
  for (double v : fields) {
    if (!(v > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
    }
  }
  if (cycle_refine > cycle_detect) {
    throw Error(ErrorKind::InvalidArgument,
                "cycle_refine must not exceed cycle_detect");
  }
  if (ray_step_ratio >= 1.0) {
    throw Error(ErrorKind::InvalidArgument, "ray_step_ratio must be below 1");
  }
}

std::string ToleranceSet::canonical() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "cycle_detect=%.17g\ncycle_refine=%.17g\n"
                "indifferent_margin=%.17g\nfatou_tol=%.17g\n"
                "ray_step_ratio=%.17g\nmatch_tol=%.17g\n",
                cycle_detect, cycle_refine, indifferent_margin, fatou_tol,
                ray_step_ratio, match_tol);
  return buf;
}

}  // namespace plike
