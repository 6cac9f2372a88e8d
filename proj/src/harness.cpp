#include "fpp/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace fpp {

namespace fs = std::filesystem;
using nlohmann::json;

const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::holes: return "holes";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::shape: return "shape";
    case ExperimentKind::barrel: return "barrel";
    case ExperimentKind::plant: return "plant";
    case ExperimentKind::sector: return "sector";
    case ExperimentKind::straightness: return "straightness";
    case ExperimentKind::kesten: return "kesten";
    case ExperimentKind::concentration: return "concentration";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

struct IniMap {
  std::map<std::string, std::string> kv;  // "section.key" -> value

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string get(const std::string& k, const std::string& dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  }
  double getd(const std::string& k, double dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : std::stod(it->second);
  }
  int64_t geti(const std::string& k, int64_t dflt) const {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : std::stoll(it->second);
  }
};

IniMap parse_ini(const std::string& text) {
  IniMap ini;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: bad line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    ini.kv[section.empty() ? key : section + "." + key] = val;
  }
  return ini;
}

WeightDistribution parse_distribution(const IniMap& ini) {
  const std::string kind = ini.get("distribution.kind", "exponential");
  if (kind == "constant") return WeightDistribution::constant(ini.getd("distribution.c", 1.0));
  if (kind == "two_point")
    return WeightDistribution::two_point(ini.getd("distribution.a", 1.0),
                                         ini.getd("distribution.b", 2.0),
                                         ini.getd("distribution.p_a", 0.5));
  if (kind == "uniform")
    return WeightDistribution::uniform(ini.getd("distribution.lo", 0.0),
                                       ini.getd("distribution.hi", 1.0));
  if (kind == "exponential")
    return WeightDistribution::exponential(ini.getd("distribution.rate", 1.0));
  if (kind == "shifted_exponential")
    return WeightDistribution::shifted_exponential(ini.getd("distribution.shift", 0.5),
                                                   ini.getd("distribution.rate", 1.0));
  throw std::invalid_argument("config: unknown distribution kind: " + kind);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, ExperimentKind kind_hint,
                                   bool kind_given) {
  IniMap ini = parse_ini(text);
  ExperimentConfig c;
  c.kind = kind_hint;
  if (!kind_given && ini.has("experiment.kind")) {
    const std::string k = ini.get("experiment.kind", "holes");
    bool found = false;
    for (int i = 0; i <= int(ExperimentKind::concentration); ++i)
      if (k == experiment_name(ExperimentKind(i))) {
        c.kind = ExperimentKind(i);
        found = true;
      }
    if (!found) throw std::invalid_argument("config: unknown experiment kind: " + k);
  }
  c.dim = int(ini.geti("experiment.dim", 2));
  c.distribution = parse_distribution(ini);
  c.base_seed = uint64_t(ini.geti("experiment.base_seed", 1));
  c.seed_count = int(ini.geti("experiment.seeds", 1));
  if (ini.has("experiment.seed_list")) {
    for (double v : parse_list(ini.get("experiment.seed_list", "")))
      c.explicit_seeds.push_back(uint64_t(v));
  }
  if (ini.has("experiment.t")) c.t_grid = parse_list(ini.get("experiment.t", ""));
  c.workers = int(ini.geti("experiment.workers", 1));

  c.a = ini.getd("gadgets.a", c.a);
  c.b = ini.getd("gadgets.b", c.b);
  c.eps = ini.getd("gadgets.eps", c.eps);
  c.n_mode = ini.get("gadgets.n_mode", c.n_mode);
  c.n = int(ini.geti("gadgets.n", c.n));
  c.c12 = ini.getd("gadgets.c12", c.c12);
  c.b_prime = ini.getd("gadgets.b_prime", c.b_prime);
  c.C18 = ini.getd("gadgets.C18", c.C18);
  c.p = ini.getd("gadgets.p", c.p);
  c.scan_window_inflation = int(ini.geti("gadgets.window_inflation", c.scan_window_inflation));
  c.barrel_mode_samples = int(ini.geti("gadgets.mode_samples", c.barrel_mode_samples));

  if (ini.has("probe.radii")) c.radii = parse_list(ini.get("probe.radii", ""));
  c.replicas = int(ini.geti("probe.replicas", c.replicas));
  c.kesten_n = int(ini.geti("probe.kesten_n", c.kesten_n));
  c.kesten_exact = ini.get("probe.kesten_exact", c.kesten_exact ? "true" : "false") == "true";

  c.max_vertices = uint64_t(ini.geti("resources.max_vertices", int64_t(c.max_vertices)));
  c.max_seconds = ini.getd("resources.max_seconds", 0);

  if (ini.has("output.dir")) {
    c.out_dir = ini.get("output.dir", c.out_dir);
  } else if (const char* env = std::getenv("FPP_OUTPUT_DIR")) {
    c.out_dir = env;
  }
  if (c.n_mode != "constant" && c.n_mode != "log")
    throw std::invalid_argument("config: n_mode must be 'constant' or 'log'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_config_text(text, ExperimentKind::holes, false);
}

std::vector<uint64_t> ExperimentConfig::seeds() const {
  if (!explicit_seeds.empty()) return explicit_seeds;
  std::vector<uint64_t> out;
  for (int i = 0; i < seed_count; ++i) out.push_back(base_seed + uint64_t(i));
  return out;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("experiment.kind", experiment_name(kind));
  e.emplace_back("experiment.dim", std::to_string(dim));
  e.emplace_back("distribution", distribution.describe());
  e.emplace_back("experiment.base_seed", std::to_string(base_seed));
  e.emplace_back("experiment.seeds", std::to_string(seed_count));
  {
    std::string s;
    for (uint64_t v : seeds()) s += (s.empty() ? "" : ",") + std::to_string(v);
    e.emplace_back("experiment.seed_list", s);
  }
  {
    std::string s;
    for (double v : t_grid) s += (s.empty() ? "" : ",") + fmt(v);
    e.emplace_back("experiment.t", s);
  }
  e.emplace_back("experiment.workers", std::to_string(workers));
  e.emplace_back("gadgets.a", fmt(a));
  e.emplace_back("gadgets.b", fmt(b));
  e.emplace_back("gadgets.eps", fmt(eps));
  e.emplace_back("gadgets.n_mode", n_mode);
  e.emplace_back("gadgets.n", std::to_string(n));
  e.emplace_back("gadgets.c12", fmt(c12));
  e.emplace_back("gadgets.b_prime", fmt(b_prime));
  e.emplace_back("gadgets.C18", fmt(C18));
  e.emplace_back("gadgets.p", fmt(p));
  e.emplace_back("gadgets.window_inflation", std::to_string(scan_window_inflation));
  e.emplace_back("gadgets.mode_samples", std::to_string(barrel_mode_samples));
  {
    std::string s;
    for (double v : radii) s += (s.empty() ? "" : ",") + fmt(v);
    e.emplace_back("probe.radii", s);
  }
  e.emplace_back("probe.replicas", std::to_string(replicas));
  e.emplace_back("probe.kesten_n", std::to_string(kesten_n));
  e.emplace_back("probe.kesten_exact", kesten_exact ? "true" : "false");
  e.emplace_back("resources.max_vertices", std::to_string(max_vertices));
  e.emplace_back("resources.max_seconds", fmt(max_seconds));
  e.emplace_back("output.dir", out_dir);
  return e;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

namespace {

struct Csv {
  std::string body;
  explicit Csv(const std::string& header) { body = header + "\n"; }
  template <typename... Args>
  void row(const Args&... args) {
    std::string line;
    ((line += cell(args) + ","), ...);
    if (!line.empty()) line.pop_back();
    body += line + "\n";
  }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(uint64_t v) { return std::to_string(v); }
  static std::string cell(int64_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << body;
  }
};

void write_echo(const ExperimentConfig& config, std::ostream& os) {
  for (const auto& [k, v] : config.echo()) os << k << " = " << v << "\n";
}

// run fn(seed) across the worker pool; results land at the seed's index.
// When the wall-time cap is exhausted, remaining seeds are recorded as
// skipped instead of being started.
template <typename R, typename F>
std::vector<std::optional<R>> map_seeds(const ExperimentConfig& config,
                                        std::vector<SeedStatus>& statuses, F&& fn) {
  const std::vector<uint64_t> seeds = config.seeds();
  std::vector<std::optional<R>> results(seeds.size());
  statuses.assign(seeds.size(), {});

  std::mutex mu;
  size_t next = 0;
  const auto sweep_start = std::chrono::steady_clock::now();
  auto worker = [&]() {
    while (true) {
      size_t i;
      bool out_of_time;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= seeds.size()) return;
        i = next++;
        out_of_time =
            config.max_seconds > 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_start)
                    .count() > config.max_seconds;
      }
      SeedStatus st;
      st.seed = seeds[i];
      if (out_of_time) {
        st.ok = false;
        st.error = "skipped: wall-time cap exceeded";
        std::lock_guard<std::mutex> lock(mu);
        statuses[i] = st;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        results[i] = fn(seeds[i]);
        st.ok = true;
      } catch (const std::exception& e) {
        st.ok = false;
        st.error = e.what();
      }
      st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      {
        std::lock_guard<std::mutex> lock(mu);
        statuses[i] = st;
      }
    }
  };

  const int nw = std::max(1, std::min<int>(config.workers, int(seeds.size())));
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

struct HoleSweepResult {
  struct Row {
    double t;
    uint64_t hole_id;
    uint64_t volume;
    double radial, lateral;
  };
  std::vector<Row> hole_rows;
  struct Summary {
    double t;
    uint64_t N, M, boundary, volume;
  };
  std::vector<Summary> summaries;
};

HoleSweepResult hole_sweep(const ExperimentConfig& config, uint64_t seed) {
  if (config.t_grid.empty()) throw std::invalid_argument("holes: t grid required");
  std::vector<double> ts = config.t_grid;
  std::sort(ts.begin(), ts.end());
  WeightField field(config.dim, config.distribution, seed);
  Ball ball(field, Vertex::zero(config.dim), GrowthLimits{config.max_vertices});
  HoleSweepResult out;
  for (double t : ts) {
    ball.grow_to(t);
    HoleReport rep = detect_holes(ball);
    for (size_t h = 0; h < rep.holes.size(); ++h)
      out.hole_rows.push_back({t, h, rep.holes[h].volume, rep.holes[h].radial_diameter,
                               rep.holes[h].lateral_diameter});
    out.summaries.push_back({t, rep.N, rep.M, rep.edge_boundary_size, ball.size()});
  }
  return out;
}

int pick_n(const ExperimentConfig& config, double t) {
  if (config.n_mode == "log")
    return std::max(4, int(std::floor(config.c12 * std::pow(std::log(std::max(2.0, t)),
                                                            1.0 / config.dim))));
  return config.n;
}

}  // namespace

RunManifest run(const ExperimentConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.version = kVersionTag;
  manifest.config_echo = config.echo();

  fs::create_directories(config.out_dir);
  const std::string dir = config.out_dir + "/";
  auto outfile = [&](const std::string& name) {
    manifest.output_files.push_back(dir + name);
    return dir + name;
  };

  std::ostringstream summary;
  summary << "# " << experiment_name(config.kind) << " summary (" << kVersionTag << ")\n";
  write_echo(config, summary);
  summary << "\n";

  switch (config.kind) {
    case ExperimentKind::holes:
    case ExperimentKind::scaling: {
      auto results = map_seeds<HoleSweepResult>(
          config, manifest.seeds, [&](uint64_t seed) { return hole_sweep(config, seed); });

      Csv holes("seed,t,hole_id,volume,radial_diameter,lateral_diameter");
      Csv series("seed,t,N,M,edge_boundary,ball_volume");
      std::vector<SeriesPoint> points;
      const auto seeds = config.seeds();
      for (size_t i = 0; i < results.size(); ++i) {
        if (!results[i]) continue;
        for (const auto& r : results[i]->hole_rows)
          holes.row(seeds[i], r.t, r.hole_id, r.volume, r.radial, r.lateral);
        for (const auto& s : results[i]->summaries) {
          series.row(seeds[i], s.t, s.N, s.M, s.boundary, s.volume);
          points.push_back({s.t, seeds[i], double(s.N), double(s.M), double(s.volume),
                            double(s.boundary)});
        }
      }
      holes.write(outfile("holes.csv"));
      series.write(outfile("summary.csv"));

      if (config.kind == ExperimentKind::scaling && !points.empty()) {
        ScalingFit fit = fit_scaling(points);
        if (fit.insufficient_holes) {
          summary << "insufficient holes: every mean N(t) is zero\n";
        } else {
          summary << "slope_N = " << fmt(fit.n_fit.slope) << " (R2 = " << fmt(fit.n_fit.r2)
                  << ", CI95 = [" << fmt(fit.slope_ci_lo) << ", " << fmt(fit.slope_ci_hi)
                  << "])\n";
          summary << "M ~ c log t: c = " << fmt(fit.m_fit.coef_log)
                  << " rss = " << fmt(fit.m_fit.rss_log) << "\n";
          summary << "M ~ (log t)^C: C = " << fmt(fit.m_fit.exponent_loglog)
                  << " rss = " << fmt(fit.m_fit.rss_loglog) << "\n";
          summary << "M ~ C t log t: C = " << fmt(fit.m_fit.coef_tlog)
                  << " rss = " << fmt(fit.m_fit.rss_tlog) << "\n";
          const char* names[] = {"c log t", "(log t)^C", "C t log t"};
          summary << "best M model by rss: " << names[fit.m_fit.best] << "\n";
        }
      }
      break;
    }

    case ExperimentKind::shape: {
      // one estimate across replicas; seeds() gives the replica base
      FieldParams params{config.dim, config.distribution, config.base_seed};
      const double rmax = config.radii.empty() ? 100 : *std::max_element(config.radii.begin(),
                                                                         config.radii.end());
      std::vector<Vertex> dirs;
      if (config.dim == 2)
        dirs = {Vertex(1, 0), Vertex(0, 1), Vertex(1, 1), Vertex(2, 1), Vertex(-1, 1)};
      else {
        dirs.push_back(Vertex::unit(config.dim, 0));
        dirs.push_back(Vertex::unit(config.dim, 1));
      }
      manifest.seeds.assign(1, {});
      manifest.seeds[0].seed = config.base_seed;
      try {
        ShapeEstimate est =
            estimate_shape(params, dirs, rmax, config.replicas, GrowthLimits{config.max_vertices});
        Csv csv("dir_x,dir_y,radius,mean_over_replicas,g_hat,std_error");
        for (const auto& de : est.directions)
          for (size_t ri = 0; ri < est.radii_used.size(); ++ri)
            csv.row(int(de.direction.c[0]), int(de.direction.c[1]), est.radii_used[ri],
                    de.per_radius_mean[ri], de.g_hat, de.std_error);
        csv.write(outfile("shape.csv"));
        summary << "replicas = " << config.replicas << "\n";
        for (const auto& de : est.directions)
          summary << "g_hat(" << de.direction.str() << ") = " << fmt(de.g_hat) << " +- "
                  << fmt(de.std_error) << "\n";
        summary << "in_radius = " << fmt(est.in_radius) << "\nout_radius = " << fmt(est.out_radius)
                << "\n";
        manifest.seeds[0].ok = true;
      } catch (const std::exception& e) {
        manifest.seeds[0].error = e.what();
      }
      break;
    }

    case ExperimentKind::barrel: {
      manifest.seeds.assign(1, {});
      manifest.seeds[0].seed = config.base_seed;
      try {
        Csv csv(
            "n,a,b,eps,delta,m1,m2,m3,L,chain_ok,mode,sample_seed,upper_ok,lower_ok,"
            "upper_margin,lower_margin");
        std::vector<int> ns = {config.n};
        auto run_one = [&](int n, BandMode mode, uint64_t sseed, const char* name) {
          BarrelSpec spec = BarrelSpec::make_relaxed(n, config.a, config.b, config.eps);
          BarrelReport rep = verify_barrel(spec, config.dim, mode, sseed);
          csv.row(n, spec.a, spec.b, spec.eps, spec.delta, spec.m1, spec.m2, spec.m3, spec.L,
                  spec.chain_ok, name, sseed, rep.upper_ok, rep.lower_ok, rep.upper_margin,
                  rep.lower_margin);
          summary << "n=" << n << " mode=" << name << " upper_ok=" << rep.upper_ok
                  << " lower_ok=" << rep.lower_ok << " upper_margin=" << fmt(rep.upper_margin)
                  << " lower_margin=" << fmt(rep.lower_margin) << "\n";
        };
        for (int n : ns) {
          run_one(n, BandMode::max_extremal, 0, "max_extremal");
          run_one(n, BandMode::min_extremal, 0, "min_extremal");
          for (int s = 0; s < config.barrel_mode_samples; ++s)
            run_one(n, BandMode::sampled, config.base_seed + uint64_t(s), "sampled");
        }
        csv.write(outfile("barrel.csv"));
        manifest.seeds[0].ok = true;
      } catch (const std::exception& e) {
        manifest.seeds[0].error = e.what();
      }
      break;
    }

    case ExperimentKind::plant: {
      if (config.t_grid.empty()) throw std::invalid_argument("plant: t grid required");
      const double t = config.t_grid.front();
      struct PlantRow {
        int n;
        Vertex x;
        PlantReport rep;
      };
      auto results = map_seeds<std::vector<PlantRow>>(
          config, manifest.seeds, [&](uint64_t seed) {
            const int n = pick_n(config, t);
            BarrelSpec spec = BarrelSpec::make(n, config.a, config.b, config.eps);
            WeightField field(config.dim, config.distribution, seed);
            Ball ball(field, Vertex::zero(config.dim), GrowthLimits{config.max_vertices});
            ball.grow_to(t);
            const int inflation = config.scan_window_inflation > 0
                                      ? config.scan_window_inflation
                                      : n + int(std::sqrt(double(n))) + 2;
            ScanResult scan = scan_good_vertices(ball, config.b_prime, n, inflation);
            std::vector<PlantRow> rows;
            PlantLog log;
            for (const auto& cert : scan.certificates) {
              PlantReport rep = plant_and_verify_hole(ball, cert, spec,
                                                      BandMode::max_extremal, log);
              rows.push_back({n, cert.x, rep});
              break;  // one plant per seed keeps the sweep bounded
            }
            return rows;
          });

      Csv csv("seed,t,n,x0,x1,window_lo,window_hi,s,formed,component_size");
      const auto seeds = config.seeds();
      int plants = 0, formed = 0;
      for (size_t i = 0; i < results.size(); ++i) {
        if (!results[i]) continue;
        for (const auto& row : *results[i]) {
          ++plants;
          if (row.rep.hole_formed) ++formed;
          for (size_t si = 0; si < row.rep.s_values.size(); ++si)
            csv.row(seeds[i], t, row.n, int(row.x.c[0]), int(row.x.c[1]), row.rep.window_lo,
                    row.rep.window_hi, row.rep.s_values[si], bool(row.rep.formed_at_s[si]),
                    row.rep.component_sizes[si]);
        }
      }
      csv.write(outfile("plant.csv"));
      summary << "plants = " << plants << "\nformed_everywhere = " << formed << "\n";
      break;
    }

    case ExperimentKind::sector: {
      struct SectorRow {
        double t;
        SectorTestReport rep;
      };
      auto results = map_seeds<std::vector<SectorRow>>(
          config, manifest.seeds, [&](uint64_t seed) {
            std::vector<double> ts = config.t_grid;
            std::sort(ts.begin(), ts.end());
            WeightField field(config.dim, config.distribution, seed);
            Ball ball(field, Vertex::zero(config.dim), GrowthLimits{config.max_vertices});
            std::vector<SectorRow> rows;
            for (double t : ts) {
              ball.grow_to(t);
              HoleReport holes = detect_holes(ball);
              rows.push_back({t, largest_hole_sector_test(holes, config.C18)});
            }
            return rows;
          });

      Csv csv("seed,t,has_hole,contained,x0_x,x0_y,hole_volume,near,far,left,right");
      const auto seeds = config.seeds();
      std::map<double, std::pair<int, int>> freq;  // t -> (contained, with_hole)
      for (size_t i = 0; i < results.size(); ++i) {
        if (!results[i]) continue;
        for (const auto& row : *results[i]) {
          csv.row(seeds[i], row.t, row.rep.has_hole, row.rep.contained, int(row.rep.x0.c[0]),
                  int(row.rep.x0.c[1]), row.rep.hole_volume, row.rep.escapes_near,
                  row.rep.escapes_far, row.rep.escapes_left, row.rep.escapes_right);
          if (row.rep.has_hole) {
            freq[row.t].second += 1;
            if (row.rep.contained) freq[row.t].first += 1;
          }
        }
      }
      csv.write(outfile("sector.csv"));
      for (auto& [t, cf] : freq)
        summary << "t=" << fmt(t) << " containment_frequency = " << cf.first << "/" << cf.second
                << "\n";
      break;
    }

    case ExperimentKind::straightness: {
      manifest.seeds.assign(1, {});
      manifest.seeds[0].seed = config.base_seed;
      try {
        FieldParams params{config.dim, config.distribution, config.base_seed};
        StraightnessReport rep = straightness_probe(params, config.radii, config.p,
                                                    config.seed_count, 4,
                                                    GrowthLimits{config.max_vertices});
        Csv csv("seed,radius,x_x,x_y,max_angle,out_count");
        for (const auto& row : rep.rows)
          csv.row(row.seed, row.radius, int(row.x.c[0]), int(row.x.c[1]), row.max_angle,
                  row.out_count);
        csv.write(outfile("straightness.csv"));
        summary << "p = " << fmt(config.p) << "\nloglog_slope = " << fmt(rep.loglog_slope) << "\n";
        manifest.seeds[0].ok = true;
      } catch (const std::exception& e) {
        manifest.seeds[0].error = e.what();
      }
      break;
    }

    case ExperimentKind::kesten: {
      manifest.seeds.assign(1, {});
      manifest.seeds[0].seed = config.base_seed;
      try {
        FieldParams params{config.dim, config.distribution, config.base_seed};
        KestenReport rep =
            kesten_probe(params, config.kesten_n, config.seed_count, config.kesten_exact);
        Csv csv("configuration,min_ratio");
        for (size_t i = 0; i < rep.min_ratios.size(); ++i)
          csv.row(uint64_t(config.base_seed + i), rep.min_ratios[i]);
        csv.write(outfile("kesten.csv"));
        summary << "n = " << rep.n << "\nexact = " << (rep.exact ? "true" : "false")
                << "\noverall_min_ratio = " << fmt(rep.overall_min)
                << "\npercentile_1 = " << fmt(rep.percentile_1) << "\n";
        manifest.seeds[0].ok = true;
      } catch (const std::exception& e) {
        manifest.seeds[0].error = e.what();
      }
      break;
    }

    case ExperimentKind::concentration: {
      manifest.seeds.assign(1, {});
      manifest.seeds[0].seed = config.base_seed;
      try {
        FieldParams params{config.dim, config.distribution, config.base_seed};
        ConcentrationReport rep =
            concentration_probe(params, Vertex::unit(config.dim, 0), config.radii,
                                config.replicas, {1, 2, 3}, GrowthLimits{config.max_vertices});
        Csv csv("radius,mean,stddev,g_hat,exceed_c1,exceed_c2,exceed_c3,min_radial_rate");
        for (const auto& row : rep.rows)
          csv.row(row.radius, row.mean, row.stddev, row.g_hat, row.exceed_fraction[0],
                  row.exceed_fraction[1], row.exceed_fraction[2], row.min_radial_rate);
        csv.write(outfile("concentration.csv"));
        summary << "replicas = " << rep.replicas << "\nchi = " << fmt(rep.chi)
                << (rep.degenerate ? " (degenerate: zero variance)" : "") << "\n";
        manifest.seeds[0].ok = true;
      } catch (const std::exception& e) {
        manifest.seeds[0].error = e.what();
      }
      break;
    }
  }

  {
    std::ofstream os(outfile("summary.txt"), std::ios::trunc);
    os << summary.str();
  }

  bool any_fail = false, all_fail = !manifest.seeds.empty();
  for (const auto& st : manifest.seeds) {
    any_fail |= !st.ok;
    all_fail &= !st.ok;
  }
  manifest.exit_code = any_fail ? 2 : 0;
  (void)all_fail;

  manifest.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  manifest.write(dir + "manifest.json");
  return manifest;
}

void RunManifest::write(const std::string& path) const {
  json j;
  j["version"] = version;
  j["total_seconds"] = total_seconds;
  j["exit_code"] = exit_code;
  json echo = json::object();
  for (const auto& [k, v] : config_echo) echo[k] = v;
  j["config"] = echo;
  j["outputs"] = output_files;
  json seeds_j = json::array();
  for (const auto& st : seeds) {
    json s;
    s["seed"] = st.seed;
    s["ok"] = st.ok;
    s["seconds"] = st.seconds;
    if (!st.ok) s["error"] = st.error;
    seeds_j.push_back(s);
  }
  j["seeds"] = seeds_j;
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << "\n";
}

}  // namespace fpp
