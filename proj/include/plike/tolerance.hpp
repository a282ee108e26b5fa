#pragma once

#include <string>

namespace plike {

/// Numerical tolerances shared by every module. Defaults are the documented
/// calibration; a config file or CLI flags may override them.
struct ToleranceSet {
  double cycle_detect = 1e-8;
  double cycle_refine = 1e-12;
  double indifferent_margin = 1e-4;
  double fatou_tol = 1e-9;
  double ray_step_ratio = 0.85;
  double match_tol = 1e-8;

  /// Throws Error(InvalidArgument) unless every field is strictly positive,
  /// cycle_refine <= cycle_detect and ray_step_ratio < 1.
  void validate() const;

  /// Canonical `key=value` lines, stable across runs; feeds config digests.
  std::string canonical() const;
};

/// Iteration budgets. Loci get a larger default than dynamical planes since
/// parabolic convergence is only polynomially fast.
struct Budgets {
  int locus = 20000;
  int julia = 5000;
  int max_period = 64;
};

}  // namespace plike
