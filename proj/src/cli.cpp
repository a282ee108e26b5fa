#include "plike/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "plike/angle.hpp"
#include "plike/boettcher.hpp"
#include "plike/error.hpp"
#include "plike/family.hpp"
#include "plike/render.hpp"
#include "plike/straightening.hpp"

namespace plike {

namespace {

using Json = nlohmann::ordered_json;

// A usage problem found after parsing; maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError(what + ": cannot parse '" + std::string(s) + "' as a number");
  }
  return v;
}

// "re,im" or a bare real.
Cx parse_cx(const std::string& s, const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_double(s, what), 0.0};
  return {parse_double(std::string_view(s).substr(0, comma), what),
          parse_double(std::string_view(s).substr(comma + 1), what)};
}

// "N" or "WxH".
std::pair<int, int> parse_px(const std::string& s) {
  auto to_int = [&](std::string_view v) {
    int n = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc{} || ptr != v.data() + v.size() || n < 1) {
      throw UsageError("--px: expected N or WxH with positive integers, got '" + s + "'");
    }
    return n;
  };
  const auto x = s.find('x');
  if (x == std::string::npos) {
    const int n = to_int(s);
    return {n, n};
  }
  return {to_int(std::string_view(s).substr(0, x)), to_int(std::string_view(s).substr(x + 1))};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  f << bytes;
  f.close();
  if (!f) throw std::runtime_error("cannot write " + path);
}

struct Shared {
  std::string px = "512";
  std::string center;
  std::optional<double> width;
  int budget = 0;
  int max_period = Budgets{}.max_period;
  int threads = 0;
  std::string out;
  bool png = false;
  ToleranceSet tol;
};

struct RenderArgs {
  std::string family = "cubic";
  std::string param = "0,0";
  std::string branch = "principal";
  bool overlay = false;
};

struct RayArgs {
  std::string a = "0,1";
  std::string angle;
  double t_min = 1e-4;
  double t_max = 4.0;
};

struct CenterArgs {
  std::string plane = "cubic";
  int period = 1;
  std::string seed;
  int periods = 4;
  int scan_px = ScanOptions{}.resolution;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv);

 private:
  std::ostream& out_;
  std::ostream& err_;
  Shared sh_;
  RenderArgs render_;
  RayArgs ray_;
  CenterArgs centers_;
  std::string chi_a_;

  std::string prefix(const std::string& fallback) const { return sh_.out.empty() ? fallback : sh_.out; }

  GridSpec grid(Cx default_center, double default_width) const {
    const auto [w, h] = parse_px(sh_.px);
    GridSpec g{sh_.center.empty() ? default_center : parse_cx(sh_.center, "--center"),
               sh_.width.value_or(default_width), w, h};
    g.validate();
    return g;
  }

  RenderConfig config(int default_budget) const {
    RenderConfig cfg;
    cfg.budget = sh_.budget > 0 ? sh_.budget : default_budget;
    cfg.max_period = sh_.max_period;
    cfg.tol = sh_.tol;
    cfg.threads = sh_.threads;
    return cfg;
  }

  RayOptions ray_options() const {
    RayOptions opt;
    opt.step_ratio = sh_.tol.ray_step_ratio;
    return opt;
  }

  void emit_raster(const std::string& kind, const std::string& name, const Raster& r,
                   const RenderConfig& cfg) {
    const std::string p = prefix(name);
    std::ostringstream ppm;
    write_ppm(ppm, r);
    write_file(p + ".ppm", ppm.str());
    if (sh_.png) {
      std::ostringstream png;
      write_png(png, r);
      write_file(p + ".png", png.str());
    }
    const std::string side = sidecar_json(kind, r, cfg);
    write_file(p + ".json", side + "\n");
    out_ << side << "\n";
  }

  void emit_json(const std::string& name, const std::string& json) {
    if (!sh_.out.empty()) write_file(prefix(name) + ".json", json + "\n");
    out_ << json << "\n";
  }

  void render_m1_cmd() {
    const RenderConfig cfg = config(Budgets{}.locus);
    if (render_.branch != "principal" && render_.branch != "negated") {
      throw UsageError("--branch must be principal or negated");
    }
    const auto branch = render_.branch == "negated" ? RootBranch::Negated : RootBranch::Principal;
    emit_raster("m1", "m1", render_m1(grid(Cx{-0.75, 0.0}, 3.6), cfg, branch), cfg);
  }

  void render_cubic_cmd() {
    const RenderConfig cfg = config(Budgets{}.locus);
    Raster r = render_cubic_locus(grid(Cx{}, 6.0), cfg);
    std::string kind = "cubic";
    if (render_.overlay) {
      const double t_min = 4.0 * r.grid.pixel_size();
      for (int k : {1, 2}) {
        r = overlay_ray(r, trace_parameter_ray(Turns::rational(k, 6), t_min, 4.0, ray_options()));
      }
      kind += "+rays";
    }
    emit_raster(kind, "cubic", r, cfg);
  }

  void render_julia_cmd() {
    const RenderConfig cfg = config(Budgets{}.julia);
    const Cx p = parse_cx(render_.param, "--param");
    FamilySlot slot = FamilySlot::ext_h2();
    if (render_.family == "cubic") slot = FamilySlot::cubic(p);
    else if (render_.family == "perone") slot = FamilySlot::per_one(p);
    else if (render_.family != "h2") throw UsageError("--family must be cubic, perone or h2");
    Raster r = render_julia(slot, grid(Cx{}, 4.0), cfg);
    std::string kind = "julia:" + render_.family + ":" + fmt(p.real()) + "," + fmt(p.imag());
    if (render_.overlay) {
      if (render_.family != "cubic") throw UsageError("--overlay needs --family cubic");
      const double t_min = 4.0 * r.grid.pixel_size();
      for (int k : {0, 1}) {
        r = overlay_ray(r, trace_dynamical_ray(p, Turns::rational(k, 2), t_min, 4.0, ray_options()));
      }
      kind += "+rays";
    }
    emit_raster(kind, "julia", r, cfg);
  }

  void ray_cmd(bool dynamical) {
    if (ray_.angle.empty()) throw UsageError("--angle is required");
    Turns angle = Turns::rational(0, 1);
    try {
      angle = Turns::parse(ray_.angle);
    } catch (const Error& e) {
      throw UsageError(std::string("--angle: ") + e.what());
    }
    const Cx a = parse_cx(ray_.a, "--a");
    const Ray ray = dynamical ? trace_dynamical_ray(a, angle, ray_.t_min, ray_.t_max, ray_options())
                              : trace_parameter_ray(angle, ray_.t_min, ray_.t_max, ray_options());
    std::ostringstream csv;
    write_ray_csv(csv, ray);
    const std::string p = prefix(dynamical ? "dyn_ray" : "param_ray");
    write_file(p + ".csv", csv.str());
    Json j;
    j["kind"] = dynamical ? "dynamical" : "parameter";
    j["angle"] = angle.to_string();
    if (dynamical) j["a"] = {a.real(), a.imag()};
    j["samples"] = ray.samples.size();
    if (!ray.samples.empty()) {
      const Cx last = ray.samples.back().point;
      j["t_last"] = ray.samples.back().t;
      j["last"] = {last.real(), last.imag()};
      j["last_modulus"] = std::abs(last);
    }
    j["csv"] = p + ".csv";
    out_ << j.dump(2) << "\n";
  }

  void chi_cmd() {
    const Cx a = parse_cx(chi_a_, "--a");
    const int period = rho_p((a.imag() < 0.0 ? -a : a), sh_.tol).first;
    std::optional<CenterCatalog> cat;
    if (period > 1) {
      ScanOptions opt;
      opt.threads = sh_.threads;
      cat = build_catalog(period, default_wedge(), sh_.tol, opt);
    }
    emit_json("chi", chi_json(chi(a, sh_.tol, cat ? &*cat : nullptr)));
  }

  ScanOptions scan() const {
    ScanOptions opt;
    opt.resolution = centers_.scan_px;
    opt.threads = sh_.threads;
    return opt;
  }

  Plane plane() const {
    if (centers_.plane == "cubic") return Plane::CubicA;
    if (centers_.plane == "perone") return Plane::PerOneA;
    throw UsageError("--plane must be cubic or perone");
  }

  void centers_cmd() {
    if (!centers_.seed.empty()) {
      const CenterRecord c =
          find_center(plane(), centers_.period, parse_cx(centers_.seed, "--seed"), sh_.tol);
      emit_json("centers", center_json(c));
      return;
    }
    check_periods();
    emit_json("centers", catalog_json(build_catalog(centers_.periods, default_wedge(), sh_.tol, scan())));
  }

  void report_cmd() {
    check_periods();
    emit_json("report",
              report_json(correspondence_report(centers_.periods, default_wedge(), sh_.tol, scan())));
  }

  void check_periods() const {
    if (centers_.periods < 1 || centers_.periods > 6) throw UsageError("--periods must lie in [1, 6]");
  }
};

int Runner::run(int argc, const char* const* argv) {
  CLI::App app{"Parabolic-like maps: loci, rays, Fatou coordinates and straightening"};
  app.name("plike");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML-style key = value file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--px", sh_.px, "Raster size, N or WxH");
  app.add_option("--center", sh_.center, "Grid center as re,im");
  app.add_option("--width", sh_.width, "Grid width in plane units");
  app.add_option("--budget", sh_.budget, "Iteration budget per orbit");
  app.add_option("--max-period,--max_period", sh_.max_period, "Longest cycle searched for");
  app.add_option("--threads", sh_.threads, "Worker threads, 0 for all cores");
  app.add_option("--out", sh_.out, "Output path prefix");
  app.add_flag("--png", sh_.png, "Also write PREFIX.png");
  app.add_option("--cycle-detect,--cycle_detect", sh_.tol.cycle_detect);
  app.add_option("--cycle-refine,--cycle_refine", sh_.tol.cycle_refine);
  app.add_option("--indifferent-margin,--indifferent_margin", sh_.tol.indifferent_margin);
  app.add_option("--fatou-tol,--fatou_tol", sh_.tol.fatou_tol);
  app.add_option("--ray-step-ratio,--ray_step_ratio", sh_.tol.ray_step_ratio);
  app.add_option("--match-tol,--match_tol", sh_.tol.match_tol);

  auto* m1 = app.add_subcommand("render-m1", "Render M1 in the B-plane");
  m1->add_option("--branch", render_.branch, "Square root of 1 - B: principal or negated");
  auto* cubic = app.add_subcommand("render-cubic", "Render the cubic connectedness locus");
  cubic->add_flag("--overlay", render_.overlay, "Draw the parameter rays 1/6 and 2/6");
  auto* julia = app.add_subcommand("render-julia", "Render a dynamical plane");
  julia->add_option("--family", render_.family, "cubic, perone or h2");
  julia->add_option("--param", render_.param, "a or A as re,im");
  julia->add_flag("--overlay", render_.overlay, "Draw the dynamical rays 0 and 1/2 (cubic)");

  auto* dyn = app.add_subcommand("trace-dyn-ray", "Trace a dynamical ray of C_a");
  dyn->add_option("--a", ray_.a, "Parameter a as re,im");
  auto* par = app.add_subcommand("trace-param-ray", "Trace a parameter ray of the cubic family");
  for (auto* sub : {dyn, par}) {
    sub->add_option("--angle", ray_.angle, "Angle in turns, p/q or decimal")->required();
    sub->add_option("--tmin", ray_.t_min, "Smallest potential");
    sub->add_option("--tmax", ray_.t_max, "Starting potential");
  }

  auto* chi_sub = app.add_subcommand("chi", "Evaluate the straightening map at a");
  chi_sub->add_option("--a", chi_a_, "Cubic parameter as re,im")->required();

  auto* centers = app.add_subcommand("centers", "Find one center or enumerate all up to --periods");
  centers->add_option("--plane", centers_.plane, "cubic or perone");
  centers->add_option("--period", centers_.period, "Period for --seed");
  centers->add_option("--seed", centers_.seed, "Newton seed as re,im");
  auto* report = app.add_subcommand("report", "Center correspondence report");
  for (auto* sub : {centers, report}) {
    sub->add_option("--periods", centers_.periods, "Largest center period (1..6)");
    sub->add_option("--scan-px", centers_.scan_px, "Seed scan resolution");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? 0 : 2;
  }

  try {
    sh_.tol.validate();
    if (sh_.threads < 0) throw UsageError("--threads must be >= 0");
    if (m1->parsed()) render_m1_cmd();
    else if (cubic->parsed()) render_cubic_cmd();
    else if (julia->parsed()) render_julia_cmd();
    else if (dyn->parsed()) ray_cmd(true);
    else if (par->parsed()) ray_cmd(false);
    else if (chi_sub->parsed()) chi_cmd();
    else if (centers->parsed()) centers_cmd();
    else if (report->parsed()) report_cmd();
  } catch (const UsageError& e) {
    err_ << Json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const Error& e) {
    err_ << Json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump() << "\n";
    return e.kind() == ErrorKind::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    err_ << Json{{"error", "IoError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  return runner.run(argc, argv);
}

}  // namespace plike
