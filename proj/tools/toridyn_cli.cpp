// toridyn: command-line front end for the torus-dynamics library.
//
// Subcommands: portrait, rotset, localrot, classify, winding, porbit,
// annular. Every run writes one JSON report plus its data artifacts into
// --out-dir. Runs are deterministic for a fixed config and seed: identical
// inputs give byte-identical artifacts and reports except for the
// wall_time_ms field.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "toridyn/io.hpp"
#include "toridyn/map.hpp"
#include "toridyn/orbit_search.hpp"
#include "toridyn/parallel.hpp"
#include "toridyn/region.hpp"
#include "toridyn/rotation.hpp"
#include "toridyn/sampling.hpp"
#include "toridyn/vec.hpp"
#include "toridyn/winding.hpp"

using namespace toridyn;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

// Thrown for failures of the numeric kind (exit code 3) as opposed to
// configuration mistakes (exit code 2).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Vec2 parse_vec(const std::string& s, const char* what) {
  std::istringstream is(s);
  double x, y;
  char comma;
  if (!(is >> x >> comma >> y) || comma != ',' || !(is >> std::ws).eof())
    throw CLI::ValidationError(std::string(what) + ": expected 'x,y', got '" +
                               s + "'");
  return Vec2(x, y);
}

IntVec parse_ivec(const std::string& s, const char* what) {
  std::istringstream is(s);
  int x, y;
  char comma;
  if (!(is >> x >> comma >> y) || comma != ',' || !(is >> std::ws).eof())
    throw CLI::ValidationError(std::string(what) + ": expected 'a,b', got '" +
                               s + "'");
  return IntVec(x, y);
}

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

json hull_json(const ConvexPolygon& hull) {
  json out = json::array();
  for (const Vec2& v : hull.vertices) out.push_back(vec_json(v));
  return out;
}

// Shared run context: output locations, seed, worker count, and the pieces
// of the final report.
struct Run {
  std::string command;
  std::string out_dir = ".";
  uint64_t seed = 0;
  int threads = 0;
  json config = json::object();
  json results = json::object();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  std::string path(const std::string& name) const {
    std::filesystem::create_directories(out_dir);
    return out_dir + "/" + name;
  }

  void write_report() const {
    json report;
    report["toolkit_version"] = kVersion;
    report["command"] = command;
    report["config"] = config;
    report["seed"] = seed;
    report["results"] = results;
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - t0)
            .count();
    std::string p = path(command + "_report.json");
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open for writing: " + p);
    out << report.dump(2) << "\n";
  }
};

int env_threads_default() {
  if (const char* env = std::getenv("TORIDYN_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return default_thread_count();
}

// Adds the options every subcommand shares.
void add_common(CLI::App* cmd, Run& run) {
  cmd->add_option("--out-dir", run.out_dir, "Directory for artifacts")
      ->capture_default_str();
  cmd->add_option("--seed", run.seed, "Deterministic seed")
      ->capture_default_str();
  run.threads = env_threads_default();
  cmd->add_option("--threads", run.threads,
                  "Worker threads (default: TORIDYN_THREADS or hardware)");
  // Accepted everywhere; consumed by the pre-pass in main().
  cmd->add_option("--config", "key = value file of defaults")
      ->type_name("FILE");
}

void echo_common(Run& run, const std::string& map_spec) {
  run.config["map"] = map_spec;
  run.config["out_dir"] = run.out_dir;
  run.config["seed"] = run.seed;
  run.config["threads"] = run.threads;
}

// ---------------------------------------------------------------- portrait

int cmd_portrait(const std::string& map_spec, int orbits, long steps, int size,
                 Run& run) {
  LiftedMap m = parse_map_spec(map_spec);
  echo_common(run, map_spec);
  run.config["orbits"] = orbits;
  run.config["steps"] = steps;
  run.config["size"] = size;

  Image img(size, size, 255, 255, 255);
  QuasiRandom2D seq(run.seed);
  std::vector<Vec2> starts(orbits);
  for (auto& s : starts) s = seq.next();
  std::vector<std::vector<TorusPoint>> orbit_pts(orbits);
  parallel_for(starts.size(), run.threads, [&](size_t k) {
    orbit_pts[k].reserve(steps + 1);
    Vec2 w = starts[k];
    orbit_pts[k].push_back(project(w));
    for (long n = 0; n < steps; ++n) {
      w = m.eval(w);
      orbit_pts[k].push_back(project(w));
    }
  });
  size_t plotted = 0;
  for (const auto& orbit : orbit_pts)
    for (const TorusPoint& p : orbit) {
      int px = std::min(static_cast<int>(p.x * size), size - 1);
      int py = std::min(static_cast<int>((1.0 - p.y) * size), size - 1);
      img.set(px, py, 0, 0, 0);
      ++plotted;
    }
  std::string out = run.path("portrait.ppm");
  write_ppm(out, img);

  run.results["image"] = out;
  run.results["points_plotted"] = plotted;
  run.results["map"] = m.label;
  run.write_report();
  return 0;
}

// --------------------------------------------------------- rotset/localrot

void report_estimate(Run& run, const RotationSetEstimate& est,
                     const std::string& prefix) {
  write_samples_csv(run.path(prefix + "_samples.csv"), est);
  write_hull_csv(run.path(prefix + "_hull.csv"), est.hull);
  write_hull_svg(run.path(prefix + "_hull.svg"), est.hull);
  run.results["hull"] = hull_json(est.hull);
  run.results["diffusion_rate"] = diffusion_rate(est.hull);
  run.results["chebyshev_center"] = vec_json(chebyshev_center(est.hull));
  run.results["hull_diameter"] = polygon_diameter(est.hull);
  run.results["max_step"] = est.max_step;
  run.results["max_displacement"] = est.max_displacement;
  run.results["samples"] = est.samples.size();
  // Straight-segment isotopy caveat: the family is a genuine isotopy
  // whenever single-step displacements stay below 1/2.
  run.results["isotopy_displacement_bound_ok"] = est.max_step < 0.5;
}

int cmd_rotset(const std::string& map_spec, int G, long N, Run& run) {
  LiftedMap m = parse_map_spec(map_spec);
  echo_common(run, map_spec);
  run.config["G"] = G;
  run.config["N"] = N;
  RotationSetEstimate est = estimate_rotation_set(m, G, N, run.threads);
  report_estimate(run, est, "rotset");
  run.write_report();
  return 0;
}

int cmd_localrot(const std::string& map_spec, const std::string& center,
                 double radius, int S, long N, Run& run) {
  LiftedMap m = parse_map_spec(map_spec);
  Vec2 c = parse_vec(center, "--center");
  echo_common(run, map_spec);
  run.config["center"] = center;
  run.config["radius"] = radius;
  run.config["S"] = S;
  run.config["N"] = N;
  Ball ball{project(c), radius};
  RotationSetEstimate est =
      estimate_local_rotation_set(m, ball, S, N, run.seed, run.threads);
  report_estimate(run, est, "localrot");
  run.write_report();
  return 0;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& map_spec, int R, int N, double eps,
                 Run& run) {
  LiftedMap m = parse_map_spec(map_spec);
  echo_common(run, map_spec);
  run.config["R"] = R;
  run.config["N"] = N;
  run.config["eps"] = eps;

  TorusClassification cls = classify_torus(m, eps, N, R, run.threads);

  // Classification map: essential dark blue, inessential light green,
  // undecided gray; one pixel per cell, row 0 of the grid at the bottom.
  Image img(R, R, 255, 255, 255);
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < R; ++i) {
      int py = R - 1 - j;
      if (cls.essential_cells.at(i, j))
        img.set(i, py, 30, 60, 150);
      else if (cls.inessential_cells.at(i, j))
        img.set(i, py, 170, 220, 170);
      else
        img.set(i, py, 128, 128, 128);
    }
  write_ppm(run.path("classify_map.ppm"), img);
  write_pbm(run.path("classify_essential.pbm"), cls.essential_cells);

  run.results["map"] = m.label;
  run.results["essential_cells"] = cls.essential_cells.count();
  run.results["inessential_cells"] = cls.inessential_cells.count();
  run.results["undecided_cells"] = cls.undecided_cells.count();
  if (!cls.essential_cells.empty()) {
    RegionClass rc = region_class(cls.essential_cells);
    run.results["essential_class"] = to_string(rc.tag);
    run.results["essential_components"] =
        rc.labeling.component_count();
  } else {
    run.results["essential_class"] = "empty";
    run.results["essential_components"] = 0;
  }
  json islands = json::array();
  for (const auto& isl : cls.islands)
    islands.push_back(
        {{"id", isl.id}, {"cells", isl.cells}, {"diameter", isl.diameter}});
  run.results["islands"] = islands;
  run.results["island_count"] = cls.islands.size();
  run.write_report();
  return 0;
}

// ----------------------------------------------------------------- winding

int cmd_winding(const std::string& map_spec, const std::string& loop_file,
                bool closed, const std::string& z_at,
                const std::string& periodic_q, const std::string& region_file,
                int k, const std::string& fixed_p, const std::string& base,
                Run& run) {
  echo_common(run, map_spec);
  run.config["k"] = k;
  int modes = (!loop_file.empty()) + (!periodic_q.empty()) +
              (!region_file.empty());
  if (modes != 1)
    throw CLI::ValidationError(
        "winding: pass exactly one of --loop, --periodic, --region");

  if (!loop_file.empty()) {
    run.config["loop"] = loop_file;
    run.config["closed"] = closed;
    run.config["z"] = z_at;
    Polyline line = read_polyline_csv(loop_file, closed);
    double w = winding_index(line, parse_vec(z_at, "--z"));
    run.results["mode"] = "winding";
    run.results["index"] = w;
  } else {
    LiftedMap m = parse_map_spec(map_spec);
    Vec2 p = parse_vec(fixed_p, "--p");
    run.config["p"] = fixed_p;
    if (!periodic_q.empty()) {
      run.config["q"] = periodic_q;
      Vec2 q = parse_vec(periodic_q, "--periodic");
      int link = linking_number_periodic(m, q, k, p);
      IsotopyPath path = isotopy_path(m, q, k);
      Polyline traj;
      traj.points = path.vertices;
      write_polyline_csv(run.path("winding_trajectory.csv"), traj);
      run.results["mode"] = "linking_periodic";
      run.results["q"] = vec_json(q);
      run.results["index"] = link;
    } else {
      run.config["region"] = region_file;
      GridRegion U = read_pbm(region_file);
      std::optional<Vec2> b;
      if (!base.empty()) {
        run.config["base"] = base;
        b = parse_vec(base, "--base");
      }
      int link = linking_number_region(m, U, k, p, b);
      run.results["mode"] = "linking_region";
      run.results["region_id"] = region_file;
      run.results["index"] = link;
    }
    run.results["k"] = k;
    run.results["p"] = vec_json(p);
  }
  run.write_report();
  return 0;
}

// ------------------------------------------------------------------ porbit

int cmd_porbit(const std::string& map_spec, const std::string& target_str,
               int grid, int iters, double tol, Run& run) {
  LiftedMap m = parse_map_spec(map_spec);
  echo_common(run, map_spec);
  run.config["target"] = target_str;
  run.config["grid"] = grid;
  run.config["newton_iters"] = iters;
  run.config["tol"] = tol;

  RealizationTarget t;
  {
    std::istringstream is(target_str);
    char c1, c2;
    if (!(is >> t.p1 >> c1 >> t.p2 >> c2 >> t.q) || c1 != ',' || c2 != ',' ||
        !(is >> std::ws).eof())
      throw CLI::ValidationError("--target: expected 'p1,p2,q', got '" +
                                 target_str + "'");
  }
  t.validate();

  auto roots = find_periodic_realizing(m, t, grid, iters, tol, run.threads);
  write_roots_csv(run.path("porbit_roots.csv"), roots);
  json jroots = json::array();
  for (const auto& r : roots)
    jroots.push_back({{"x", r.point.x()},
                      {"y", r.point.y()},
                      {"residual", r.residual}});
  run.results["roots"] = jroots;
  run.results["root_count"] = roots.size();
  run.results["empty_result"] = roots.empty();
  run.write_report();
  if (roots.empty())
    throw NumericError("porbit: no roots found for target " + target_str);
  return 0;
}

// ----------------------------------------------------------------- annular

json curve_json(const DeviationCurve& curve) {
  json out;
  out["direction"] = json::array({curve.direction.x(), curve.direction.y()});
  out["horizons"] = curve.horizons;
  out["values"] = curve.values;
  out["verdict"] = to_string(curve.verdict);
  out["growth_ratio_threshold"] = 1.2;
  out["stagnation_threshold"] = 1.02;
  return out;
}

int cmd_annular(const std::string& map_spec, const std::string& dir_str,
                int samples, long N, bool strict, Run& run) {
  LiftedMap m = parse_map_spec(map_spec);
  IntVec v = parse_ivec(dir_str, "--dir");
  echo_common(run, map_spec);
  run.config["dir"] = dir_str;
  run.config["samples"] = samples;
  run.config["N"] = N;
  run.config["strict_check"] = strict;

  DeviationCurve curve =
      annularity_probe(m, v, samples, N, run.seed, run.threads);
  write_deviation_csv(run.path("annular_deviation.csv"), curve);
  run.results["probe"] = curve_json(curve);

  if (strict) {
    // Heuristic strict-torality evidence: growth in both coordinate
    // directions together with a rotation set of nonempty interior.
    DeviationCurve cx =
        annularity_probe(m, IntVec(1, 0), samples, N, run.seed, run.threads);
    DeviationCurve cy =
        annularity_probe(m, IntVec(0, 1), samples, N, run.seed, run.threads);
    RotationSetEstimate est = estimate_rotation_set(m, 16, N, run.threads);
    double rate = diffusion_rate(est.hull);
    run.results["strict"] = {
        {"probe_x", curve_json(cx)},
        {"probe_y", curve_json(cy)},
        {"diffusion_rate", rate},
        {"strictly_toral_evidence",
         cx.verdict == GrowthVerdict::growing &&
             cy.verdict == GrowthVerdict::growing && rate > 0.0}};
  }
  run.write_report();
  return 0;
}

// ------------------------------------------------------------------- main

// Loads `key = value` lines (later keys override earlier ones) and returns
// them as "--key" "value" argument pairs.
std::vector<std::string> config_args(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw CLI::ValidationError("--config: cannot read " + file);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config: bad line '" + line + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw CLI::ValidationError("--config: empty key in '" + line + "'");
    // Later keys override: drop any earlier entry for the same key.
    std::erase_if(kv, [&](const auto& p) { return p.first == key; });
    kv.emplace_back(key, value);
  }
  std::vector<std::string> args;
  for (const auto& [k, v] : kv) {
    args.push_back((k.size() == 1 ? "-" : "--") + k);
    args.push_back(v);
  }
  return args;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"toridyn: rotation sets, essentiality, winding and orbit "
               "analysis for torus maps"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // One Run per subcommand so defaults stay independent.
  Run runs[7];
  std::string map_spec, center = "0.5,0.5", z_at = "0.5,0.5";
  std::string loop_file, periodic_q, region_file, fixed_p = "0,0", base;
  std::string target = "0,0,1", dir_str = "1,0";
  int orbits = 400, size = 800, G = 32, S = 512, R = 128, grid = 16,
      iters = 50, k = 1, cls_N = 300;
  long steps = 3000, N = 2000;
  double radius = 0.1, eps = 0.05, tol = 1e-10;
  bool closed = true, strict = false;

  auto* portrait = app.add_subcommand("portrait", "Phase portrait raster");
  runs[0].command = "portrait";
  portrait->add_option("map", map_spec, "Map spec, e.g. zaslavsky(0.19,1.69)")
      ->required();
  portrait->add_option("--orbits", orbits, "Number of seeded orbits")
      ->capture_default_str();
  portrait->add_option("--steps", steps, "Iterations per orbit")
      ->capture_default_str();
  portrait->add_option("--size", size, "Image width and height")
      ->capture_default_str();
  add_common(portrait, runs[0]);

  auto* rotset = app.add_subcommand("rotset", "Global rotation-set estimate");
  runs[1].command = "rotset";
  rotset->add_option("map", map_spec)->required();
  rotset->add_option("-G,--grid", G, "Start-point grid G x G")
      ->capture_default_str();
  rotset->add_option("-N,--horizon", N, "Iteration horizon")
      ->capture_default_str();
  add_common(rotset, runs[1]);

  auto* localrot =
      app.add_subcommand("localrot", "Local rotation set over a ball");
  runs[2].command = "localrot";
  localrot->add_option("map", map_spec)->required();
  localrot->add_option("--center", center, "Ball center x,y")
      ->capture_default_str();
  localrot->add_option("--radius", radius, "Ball radius")
      ->capture_default_str();
  localrot->add_option("-S,--samples", S, "Start points")
      ->capture_default_str();
  localrot->add_option("-N,--horizon", N, "Iteration horizon")
      ->capture_default_str();
  add_common(localrot, runs[2]);

  auto* classify =
      app.add_subcommand("classify", "Essential/inessential census");
  runs[3].command = "classify";
  classify->add_option("map", map_spec)->required();
  classify->add_option("-R,--resolution", R, "Grid resolution")
      ->capture_default_str();
  classify->add_option("-N,--steps", cls_N, "Graph step budget")
      ->capture_default_str();
  classify->add_option("--eps", eps, "Neighborhood radius (>= 2/R)")
      ->capture_default_str();
  add_common(classify, runs[3]);

  auto* winding = app.add_subcommand("winding", "Winding and linking numbers");
  runs[4].command = "winding";
  winding->add_option("map", map_spec)->required();
  winding->add_option("--loop", loop_file, "Polyline CSV for a raw winding");
  winding->add_flag("--closed,!--open", closed, "Treat the loop as closed");
  winding->add_option("--z", z_at, "Observation point x,y")
      ->capture_default_str();
  winding->add_option("--periodic", periodic_q, "Periodic point q as x,y");
  winding->add_option("--region", region_file, "Invariant region PBM");
  winding->add_option("-k,--period", k, "Period")->capture_default_str();
  winding->add_option("--p", fixed_p, "Fixed point x,y")
      ->capture_default_str();
  winding->add_option("--base", base, "Base point x,y (region mode)");
  add_common(winding, runs[4]);

  auto* porbit =
      app.add_subcommand("porbit", "Periodic orbits realizing p1/q, p2/q");
  runs[5].command = "porbit";
  porbit->add_option("map", map_spec)->required();
  porbit->add_option("--target", target, "Rotation target p1,p2,q")
      ->capture_default_str();
  porbit->add_option("--grid", grid, "Newton seed grid")->capture_default_str();
  porbit->add_option("--newton-iters", iters, "Newton iterations")
      ->capture_default_str();
  porbit->add_option("--tol", tol, "Residual tolerance")
      ->capture_default_str();
  add_common(porbit, runs[5]);

  auto* annular = app.add_subcommand("annular", "Deviation growth probe");
  runs[6].command = "annular";
  annular->add_option("map", map_spec)->required();
  annular->add_option("--dir", dir_str, "Lattice direction a,b")
      ->capture_default_str();
  annular->add_option("-S,--samples", S, "Start points")
      ->capture_default_str();
  annular->add_option("-N,--horizon", N, "Iteration horizon")
      ->capture_default_str();
  annular->add_flag("--strict", strict,
                    "Also probe both axes for strict-torality evidence");
  add_common(annular, runs[6]);

  // Pre-pass: expand --config FILE into leading arguments of the subcommand
  // so explicit flags, parsed later, win.
  std::vector<std::string> args;
  std::string config_file;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc) throw CLI::ValidationError("--config needs a file");
      config_file = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_file = a.substr(9);
    } else {
      args.push_back(a);
    }
  }
  if (!config_file.empty()) {
    if (args.empty())
      throw CLI::ValidationError("--config given without a subcommand");
    std::vector<std::string> extra = config_args(config_file);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
  }
  // CLI11 parses reversed vectors.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (portrait->parsed())
    return cmd_portrait(map_spec, orbits, steps, size, runs[0]);
  if (rotset->parsed()) return cmd_rotset(map_spec, G, N, runs[1]);
  if (localrot->parsed())
    return cmd_localrot(map_spec, center, radius, S, N, runs[2]);
  if (classify->parsed())
    return cmd_classify(map_spec, R, cls_N, eps, runs[3]);
  if (winding->parsed())
    return cmd_winding(map_spec, loop_file, closed, z_at, periodic_q,
                       region_file, k, fixed_p, base, runs[4]);
  if (porbit->parsed())
    return cmd_porbit(map_spec, target, grid, iters, tol, runs[5]);
  if (annular->parsed())
    return cmd_annular(map_spec, dir_str, S, N, strict, runs[6]);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
