#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "plike/boettcher.hpp"
#include "plike/complex.hpp"
#include "plike/family.hpp"
#include "plike/tolerance.hpp"

namespace plike {

/// Pixel grid over a rectangle of the plane; re grows rightward, im upward.
/// Pixels are square, so the plane height is width * px_h / px_w.
struct GridSpec {
  Cx center{};
  double width = 4.0;
  int px_w = 512;
  int px_h = 512;

  double pixel_size() const { return width / px_w; }
  double height() const { return pixel_size() * px_h; }
  /// Centre of pixel (i, j), row j = 0 at the top. Written so that a grid
  /// centred at 0 maps pixel (i, j) to exactly minus pixel (W-1-i, H-1-j).
  Cx point(int i, int j) const {
    const double ps = pixel_size();
    return {center.real() + (2.0 * i + 1.0 - px_w) * ps * 0.5,
            center.imag() + (px_h - 1.0 - 2.0 * j) * ps * 0.5};
  }
  /// Throws InvalidArgument on non-positive sizes or non-finite values.
  void validate() const;
};

enum Code : std::uint8_t { kNonMember = 0, kMember = 1, kUndetermined = 2, kOverlay = 3 };

struct Raster {
  GridSpec grid;
  std::vector<std::uint8_t> codes;  // row-major, px_w * px_h
  std::uint64_t config_digest = 0;

  std::uint8_t at(int i, int j) const { return codes[static_cast<std::size_t>(j) * grid.px_w + i]; }
  std::size_t count(std::uint8_t code) const;
};

struct RenderConfig {
  int budget = 20000;
  int max_period = 64;
  ToleranceSet tol;
  int threads = 0;  // 0: hardware parallelism; never affects the output
};

/// Which square root of 1 - B gives the PerOne parameter. The two choices
/// give conjugate maps, so the rendered locus must not depend on it.
enum class RootBranch { Principal, Negated };

/// M1 in the B-plane. A pixel is a non-member when both critical orbits of
/// P_A converge to the parabolic point at infinity, a member when one of
/// them is attracted to a cycle, and undetermined otherwise. B = 1 (A = 0,
/// two petals at infinity) is a member.
Raster render_m1(const GridSpec& grid, const RenderConfig& cfg,
                 RootBranch branch = RootBranch::Principal);

/// Connectedness locus of C_a in the a-plane: a non-member when either
/// critical orbit escapes.
Raster render_cubic_locus(const GridSpec& grid, const RenderConfig& cfg);

/// Dynamical plane of one map. Escape to infinity (Cubic) or convergence to
/// the parabolic point (PerOne, ExtH2) is non-membership.
Raster render_julia(const FamilySlot& slot, const GridSpec& grid, const RenderConfig& cfg);

/// Marks with kOverlay the pixels nearest each ray sample and along the
/// segments joining consecutive samples; samples outside the grid are
/// clipped.
Raster overlay_ray(Raster raster, const Ray& ray);

/// Stable 64-bit FNV-1a digest of the render kind, grid, budgets and
/// tolerances. Thread count is excluded.
std::uint64_t config_digest(std::string_view kind, const GridSpec& grid, const RenderConfig& cfg);

/// Palette: non-member white, member black, undetermined gray 128,
/// overlay red.
void write_ppm(std::ostream& out, const Raster& raster);
void write_png(std::ostream& out, const Raster& raster);
std::string sidecar_json(std::string_view kind, const Raster& raster, const RenderConfig& cfg);

}  // namespace plike
