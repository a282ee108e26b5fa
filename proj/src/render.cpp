#include "plike/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include "json.hpp"
#include <ostream>

#include "plike/error.hpp"
#include "plike/orbit.hpp"
#include "plike/worker_pool.hpp"

namespace plike {

namespace {

constexpr int kTile = 64;

template <class CodeFn>
Raster render_tiles(const GridSpec& grid, const RenderConfig& cfg, std::string_view kind,
                    CodeFn&& code_at) {
  grid.validate();
  cfg.tol.validate();
  if (cfg.budget < 1 || cfg.max_period < 1) {
    throw Error(ErrorKind::InvalidArgument, "budget and max_period must be >= 1");
  }
  Raster r;
  r.grid = grid;
  r.codes.assign(static_cast<std::size_t>(grid.px_w) * grid.px_h, kNonMember);
  r.config_digest = config_digest(kind, grid, cfg);

  const int tiles_x = (grid.px_w + kTile - 1) / kTile;
  const int tiles_y = (grid.px_h + kTile - 1) / kTile;
  parallel_for(tiles_x * tiles_y, cfg.threads, [&](int k) {
    const int i0 = (k % tiles_x) * kTile;
    const int j0 = (k / tiles_x) * kTile;
    const int i1 = std::min(i0 + kTile, grid.px_w);
    const int j1 = std::min(j0 + kTile, grid.px_h);
    for (int j = j0; j < j1; ++j) {
      for (int i = i0; i < i1; ++i) {
        r.codes[static_cast<std::size_t>(j) * grid.px_w + i] = code_at(grid.point(i, j));
      }
    }
  });
  return r;
}

Fate fate_of(const FamilySlot& slot, Cx z, const RenderConfig& cfg) {
  try {
    return classify_orbit(slot, z, cfg.budget, cfg.tol, cfg.max_period).fate;
  } catch (const Error&) {
    // Exact pole hits and overflow: no verdict for this pixel.
    return Fate::Undetermined;
  }
}

std::uint8_t m1_code(Cx B, const RenderConfig& cfg, RootBranch branch) {
  Cx A = std::sqrt(1.0 - B);
  if (branch == RootBranch::Negated) A = -A;
  if (A == Cx{}) return kMember;
  const auto slot = FamilySlot::per_one(A);
  // Start with the critical point most likely to be free; the verdict only
  // depends on the pair of fates.
  const double first = A.real() < 0.0 ? 1.0 : -1.0;
  const Fate f1 = fate_of(slot, first, cfg);
  if (f1 == Fate::AttractedToCycle) return kMember;
  const Fate f2 = fate_of(slot, -first, cfg);
  if (f2 == Fate::AttractedToCycle) return kMember;
  if (f1 == Fate::ConvergesParabolic && f2 == Fate::ConvergesParabolic) return kNonMember;
  return kUndetermined;
}

std::uint8_t cubic_code(Cx a, const RenderConfig& cfg) {
  const auto slot = FamilySlot::cubic(a);
  const auto c = cubic_critical_points(a);
  const Fate f1 = fate_of(slot, c.minus, cfg);
  if (f1 == Fate::EscapesSuper) return kNonMember;
  // The other critical point then lies in the parabolic basin.
  if (f1 == Fate::AttractedToCycle) return kMember;
  const Fate f2 = fate_of(slot, c.plus, cfg);
  if (f2 == Fate::EscapesSuper) return kNonMember;
  if (f2 == Fate::AttractedToCycle) return kMember;
  if (f1 == Fate::Undetermined || f2 == Fate::Undetermined) return kUndetermined;
  return kMember;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void put_be32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v >> 24));
  out.push_back(static_cast<char>(v >> 16));
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

void write_chunk(std::ostream& out, const char* type, const std::string& data) {
  std::string chunk;
  put_be32(chunk, static_cast<std::uint32_t>(data.size()));
  chunk.append(type, 4);
  chunk += data;
  const auto* bytes = reinterpret_cast<const Bytef*>(chunk.data());
  const uLong crc = crc32(crc32(0L, Z_NULL, 0), bytes + 4, static_cast<uInt>(chunk.size() - 4));
  put_be32(chunk, static_cast<std::uint32_t>(crc));
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
}

constexpr std::uint8_t kPalette[4][3] = {{255, 255, 255}, {0, 0, 0}, {128, 128, 128}, {255, 0, 0}};

}  // namespace

void GridSpec::validate() const {
  if (!(width > 0.0) || !std::isfinite(width) || px_w < 1 || px_h < 1 || !is_finite(center)) {
    throw Error(ErrorKind::InvalidArgument, "grid needs width > 0, positive pixel counts and a finite center");
  }
}

std::size_t Raster::count(std::uint8_t code) const {
  return static_cast<std::size_t>(std::count(codes.begin(), codes.end(), code));
}

Raster render_m1(const GridSpec& grid, const RenderConfig& cfg, RootBranch branch) {
  return render_tiles(grid, cfg, "m1", [&](Cx B) { return m1_code(B, cfg, branch); });
}

Raster render_cubic_locus(const GridSpec& grid, const RenderConfig& cfg) {
  return render_tiles(grid, cfg, "cubic", [&](Cx a) { return cubic_code(a, cfg); });
}

Raster render_julia(const FamilySlot& slot, const GridSpec& grid, const RenderConfig& cfg) {
  std::string kind = "julia:";
  switch (slot.kind()) {
    case FamilyKind::PerOne: kind += "per_one"; break;
    case FamilyKind::Cubic: kind += "cubic"; break;
    case FamilyKind::ExtH2: kind += "ext_h2"; break;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, ":%.17g,%.17g", slot.param().real(), slot.param().imag());
  kind += buf;
  const Fate escape =
      slot.kind() == FamilyKind::Cubic ? Fate::EscapesSuper : Fate::ConvergesParabolic;
  return render_tiles(grid, cfg, kind, [&](Cx z) -> std::uint8_t {
    const Fate f = fate_of(slot, z, cfg);
    if (f == escape) return kNonMember;
    if (f == Fate::Undetermined) return kUndetermined;
    return kMember;
  });
}

Raster overlay_ray(Raster raster, const Ray& ray) {
  const GridSpec& g = raster.grid;
  const double ps = g.pixel_size();
  const double left = g.center.real() - 0.5 * g.px_w * ps;
  const double top = g.center.imag() + 0.5 * g.px_h * ps;
  auto mark = [&](Cx p) {
    const double fi = std::floor((p.real() - left) / ps);
    const double fj = std::floor((top - p.imag()) / ps);
    if (!(fi >= 0 && fi < g.px_w && fj >= 0 && fj < g.px_h)) return;
    raster.codes[static_cast<std::size_t>(fj) * g.px_w + static_cast<std::size_t>(fi)] = kOverlay;
  };
  for (std::size_t k = 0; k < ray.samples.size(); ++k) {
    const Cx p = ray.samples[k].point;
    mark(p);
    if (k == 0) continue;
    const Cx q = ray.samples[k - 1].point;
    const double len = std::abs(p - q) / (0.5 * ps);
    // Very long segments lie outside any sensible grid; only walk the part
    // that can hit it.
    const int steps = static_cast<int>(std::min(len, 4.0 * (g.px_w + g.px_h)));
    for (int s = 1; s < steps; ++s) mark(q + (p - q) * (static_cast<double>(s) / steps));
  }
  return raster;
}

std::uint64_t config_digest(std::string_view kind, const GridSpec& grid, const RenderConfig& cfg) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "kind=%.*s\ncenter=%.17g,%.17g\nwidth=%.17g\npx=%d,%d\nbudget=%d\nmax_period=%d\n",
                static_cast<int>(kind.size()), kind.data(), grid.center.real(), grid.center.imag(),
                grid.width, grid.px_w, grid.px_h, cfg.budget, cfg.max_period);
  return fnv1a(std::string(buf) + cfg.tol.canonical());
}

void write_ppm(std::ostream& out, const Raster& raster) {
  out << "P6\n" << raster.grid.px_w << ' ' << raster.grid.px_h << "\n255\n";
  std::string rgb;
  rgb.reserve(raster.codes.size() * 3);
  for (std::uint8_t c : raster.codes) rgb.append(reinterpret_cast<const char*>(kPalette[c & 3]), 3);
  out.write(rgb.data(), static_cast<std::streamsize>(rgb.size()));
}

void write_png(std::ostream& out, const Raster& raster) {
  const int w = raster.grid.px_w;
  const int h = raster.grid.px_h;
  std::string raw;
  raw.reserve(static_cast<std::size_t>(h) * (3 * w + 1));
  for (int j = 0; j < h; ++j) {
    raw.push_back(0);  // filter: none
    for (int i = 0; i < w; ++i) {
      raw.append(reinterpret_cast<const char*>(kPalette[raster.at(i, j) & 3]), 3);
    }
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::string packed(packed_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                6) != Z_OK) {
    throw Error(ErrorKind::InvalidArgument, "PNG compression failed");
  }
  packed.resize(packed_size);

  static const char signature[8] = {'\x89', 'P', 'N', 'G', '\r', '\n', '\x1a', '\n'};
  out.write(signature, 8);
  std::string ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(w));
  put_be32(ihdr, static_cast<std::uint32_t>(h));
  ihdr += std::string{'\x08', '\x02', '\0', '\0', '\0'};  // 8-bit RGB
  write_chunk(out, "IHDR", ihdr);
  write_chunk(out, "IDAT", packed);
  write_chunk(out, "IEND", "");
}

std::string sidecar_json(std::string_view kind, const Raster& raster, const RenderConfig& cfg) {
  const GridSpec& g = raster.grid;
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(raster.config_digest));
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["grid"] = {{"center", {g.center.real(), g.center.imag()}},
               {"width", g.width},
               {"height", g.height()},
               {"px_w", g.px_w},
               {"px_h", g.px_h}};
  j["budget"] = cfg.budget;
  j["max_period"] = cfg.max_period;
  j["tolerances"] = {{"cycle_detect", cfg.tol.cycle_detect},
                     {"cycle_refine", cfg.tol.cycle_refine},
                     {"indifferent_margin", cfg.tol.indifferent_margin},
                     {"fatou_tol", cfg.tol.fatou_tol},
                     {"ray_step_ratio", cfg.tol.ray_step_ratio},
                     {"match_tol", cfg.tol.match_tol}};
  j["config_digest"] = digest;
  j["counts"] = {{"non_member", raster.count(kNonMember)},
                 {"member", raster.count(kMember)},
                 {"undetermined", raster.count(kUndetermined)},
                 {"overlay", raster.count(kOverlay)}};
  j["palette"] = {{"0", "white"}, {"1", "black"}, {"2", "gray128"}, {"3", "red"}};
  return j.dump(2) + "\n";
}

}  // namespace plike
