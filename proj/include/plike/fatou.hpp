#pragma once

#include <optional>
#include <vector>

#include "plike/complex.hpp"
#include "plike/family.hpp"

namespace plike {

/// Local normal form f(w) = w + a2 w^2 + a3 w^3 + ... at the parabolic point,
/// in the local coordinate w = z (Cubic, at 0) or w = 1/z (PerOne, at
/// infinity). alpha = 1 - a3/a2^2 is the log coefficient of the Fatou
/// coordinate.
struct NormalForm {
  ExtPoint fixed_point;
  Cx a2;
  Cx a3;
  Cx alpha;
};

/// Throws DegenerateParabolic when a2 = 0 and InvalidArgument for ExtH2.
NormalForm normal_form(const FamilySlot& slot);

/// Normalised incoming Fatou coordinate at the parabolic point of a PerOne
/// or Cubic map. Immutable once built.
///
/// The petal coordinate is u = -1/(a2 w); there the map reads
/// u -> u + 1 + alpha/u + O(u^-2). The coordinate is
///   Phi(z) = lim_n [ Psi(u(f^n z)) - n ] + normalization,
/// where Psi(u) = u - alpha Log u + sum_k b_k u^-k is the asymptotic
/// solution of Psi(F(u)) = Psi(u) + 1; the b_k are solved from the exact map
/// so the limit converges like u^-(K+1) instead of u^-1.
struct ParabolicChart {
  FamilySlot slot = FamilySlot::ext_h2();
  ExtPoint fixed_point;
  Cx a2;
  Cx a3;
  Cx alpha;
  Cx normalization;     // 1 - raw(anchor)
  Cx anchor;            // c_+(a) for Cubic, 2 + A for PerOne
  Cx anchor_raw;        // raw limit at the anchor
  int n_iter = 10000;
  double tol = 1e-9;
  double petal_threshold = 10.0;  // T_petal = max(10, 4|alpha|)
  std::vector<Cx> series;         // b_1 ... b_K

  /// Petal coordinate u of a finite point z.
  Cx petal_coordinate(Cx z) const;
  /// Psi(u), the asymptotic Fatou coordinate in the petal.
  Cx asymptotic(Cx u) const;
  /// The exact first-return map in the petal coordinate.
  Cx petal_map(Cx u) const;
};

/// Builds the chart and pins Phi(anchor) = 1. Throws DegenerateParabolic,
/// NotInPetal or NoConvergence (anchor does not reach the petal).
ParabolicChart build_chart(const FamilySlot& slot, int n_iter = 10000, double tol = 1e-9);

/// Phi(z) for z whose orbit enters the attracting petal within chart.n_iter
/// iterations. Throws NotInPetal / NoConvergence.
Cx fatou_coordinate(const ParabolicChart& chart, Cx z);

/// Same limit without normalization; exposed for tests and chart building.
Cx raw_fatou_coordinate(const ParabolicChart& chart, Cx z);

/// Streaming detector for convergence to the parabolic point. Feed z_0, z_1,
/// ... in order; step() turns true once the orbit is provably trapped.
///  PerOne, A != 0: |z| > max(10, 10/|A|) and Re(z conj A) > 0.
///  PerOne, A == 0: |z_n| > 10, Re z_n Re z_{n+1} > 0, |z_{n+1}| > |z_n|.
///  Cubic, ExtH2:   Re u > T_petal and Re u increasing for 5 steps, with u the
///                  petal coordinate (multiplicity-2 form when degenerate).
class ParabolicDriftTest {
 public:
  explicit ParabolicDriftTest(const FamilySlot& slot);

  bool step(Cx z);

 private:
  enum class Mode { PerOneDrift, PerOneTwoPetal, Petal, PetalDouble, H2 };

  Mode mode_;
  Cx param_;
  Cx inv_{};               // petal coordinate scale
  double radius2_ = 0.0;   // squared trigger radius (PerOne) or |z|^2 bound
  double threshold_ = 10.0;
  std::optional<Cx> prev_z_;
  double prev_re_u_ = 0.0;
  bool have_prev_u_ = false;
  int streak_ = 0;

  bool petal_step(Cx u);
};

/// True when the orbit of z0 is caught by ParabolicDriftTest within budget.
bool converges_to_parabolic(const FamilySlot& slot, Cx z0, int budget);

}  // namespace plike
