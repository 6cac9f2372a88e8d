// Acceptance suite: one pass/fail line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "fpp/harness.hpp"
#include "oracles.hpp"

using namespace fpp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// shared sweep data for criteria 3, 4 and 9: exponential(1), d = 2,
// t in {50,100,200,400}, seeds 1..20
struct SweepData {
  std::vector<double> ts = {50, 100, 200, 400};
  std::vector<uint64_t> seeds;
  std::vector<SeriesPoint> series;
  // sector containment per t in {100,200,400}: (contained, with_hole)
  std::map<double, std::pair<int, int>> sector_freq;
  double seconds = 0;
};

SweepData run_sweep() {
  SweepData data;
  const double t0 = now_seconds();
  for (uint64_t seed = 1; seed <= 20; ++seed) data.seeds.push_back(seed);
  for (uint64_t seed : data.seeds) {
    WeightField field(2, WeightDistribution::exponential(1.0), seed);
    Ball ball(field, Vertex::zero(2));
    for (double t : data.ts) {
      ball.grow_to(t);
      HoleReport rep = detect_holes(ball);
      data.series.push_back({t, seed, double(rep.N), double(rep.M), double(ball.size()),
                             double(rep.edge_boundary_size)});
      if (t >= 100) {
        SectorTestReport sec = largest_hole_sector_test(rep, 6.0);
        if (sec.has_hole) {
          data.sector_freq[t].second += 1;
          if (sec.contained) data.sector_freq[t].first += 1;
        }
      }
    }
  }
  data.seconds = now_seconds() - t0;
  return data;
}

Outcome criterion1_barrel() {
  Outcome out;
  std::ostringstream os;
  for (int n : {200, 500}) {
    const double t0 = now_seconds();
    // (a,b,eps,delta) = (1,2,0.1,1e-4); the floored m-cascade yields m2 = 0
    // here (the hypothesis chain needs eps^3 n >= 1), so the spec is built in
    // relaxed mode and the inequalities are checked exactly as stated
    BarrelSpec spec = BarrelSpec::make_relaxed(n, 1.0, 2.0, 0.1);
    BarrelReport up = verify_barrel(spec, 2, BandMode::max_extremal);
    BarrelReport lo = verify_barrel(spec, 2, BandMode::min_extremal);
    const double secs = now_seconds() - t0;
    // the far corner of R-hat attains the upper inequality with equality by
    // construction, so exact verification reports a zero minimum slack
    // there; pass = both inequalities hold exactly (slack >= 0 in ticks)
    const bool ok = up.upper_ok && lo.lower_ok && up.upper_margin_ticks >= 0 &&
                    lo.lower_margin_ticks >= 0 && secs < 10.0;
    os << " n=" << n << ": upper_ok=" << up.upper_ok << " lower_ok=" << lo.lower_ok
       << " margin_ticks=(" << up.upper_margin_ticks << "," << lo.lower_margin_ticks << ") "
       << std::round(secs * 10) / 10 << "s;";
    out.pass &= ok;
  }
  out.detail = os.str();
  return out;
}

Outcome criterion2_oracles() {
  Outcome out;
  oracle::TestRng rng(20260808);
  int growth_checks = 0, hole_checks = 0;

  // growth vs Bellman-Ford on 200 random enumerated patches <= 10x10
  for (int trial = 0; trial < 200; ++trial) {
    const int ax = int(rng.uniform_int(1, 4)), bx = int(rng.uniform_int(1, 5));
    const int ay = int(rng.uniform_int(1, 4)), by = int(rng.uniform_int(1, 5));
    const double lo = 0.3 + 0.4 * rng.uniform();
    const double hi = lo + 0.5 + rng.uniform();
    std::vector<Vertex> patch;
    for (int x = -ax; x <= bx; ++x)
      for (int y = -ay; y <= by; ++y) patch.emplace_back(x, y);
    WeightField field(2, WeightDistribution::uniform(lo, hi), rng.next());
    const int inradius = std::min(std::min(ax, bx), std::min(ay, by));
    const double t = lo * inradius;  // keeps B(t) strictly inside the patch

    auto od = oracle::bellman_ford(field, patch, Vertex::zero(2));
    Ball ball(field, Vertex::zero(2));
    ball.grow_to(t);
    bool ok = true;
    size_t expected = 0;
    for (const auto& [v, dv] : od)
      if (dv <= t) ++expected;
    if (ball.size() != expected) ok = false;
    for (const auto& [v, dv] : ball.settled_table()) {
      auto it = od.find(v);
      if (it == od.end() || it->second != dv) ok = false;
    }
    for (int probe = 0; probe < 3; ++probe) {
      Vertex v(int32_t(rng.uniform_int(-inradius, inradius)),
               int32_t(rng.uniform_int(-inradius, inradius)));
      if (v.l1() > inradius) continue;
      if (ball.passage_time(v) != od[v]) ok = false;
    }
    growth_checks += ok ? 1 : 0;
  }

  // detect_holes vs the independent flood fill on 200 random connected sets
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vertex> cells{Vertex(0, 0)};
    std::set<Vertex> in(cells.begin(), cells.end());
    const int target = int(rng.uniform_int(4, 80));
    while (int(cells.size()) < target) {
      const Vertex& v = cells[size_t(rng.uniform_int(0, int64_t(cells.size()) - 1))];
      Vertex u = v.shifted(int(rng.uniform_int(0, 1)), rng.uniform_int(0, 1) ? 1 : -1);
      if (std::abs(u.c[0]) > 12 || std::abs(u.c[1]) > 12) continue;
      if (in.insert(u).second) cells.push_back(u);
    }
    std::sort(cells.begin(), cells.end());
    HoleReport got = detect_holes(cells);
    oracle::FloodReport want = oracle::flood_fill_holes(cells);
    bool ok = got.N == want.N && got.M == want.M && got.edge_boundary_size == want.boundary;
    if (ok)
      for (size_t h = 0; h < got.holes.size(); ++h) {
        std::set<Vertex> gv(got.holes[h].vertices.begin(), got.holes[h].vertices.end());
        if (gv != want.holes[h]) ok = false;
      }
    hole_checks += ok ? 1 : 0;
  }

  out.pass = growth_checks == 200 && hole_checks == 200;
  std::ostringstream os;
  os << " growth oracle " << growth_checks << "/200, flood-fill oracle " << hole_checks
     << "/200";
  out.detail = os.str();
  return out;
}

Outcome criterion3_hole_scaling(const SweepData& data) {
  Outcome out;
  int positive = 0, expected = 0;
  for (const SeriesPoint& p : data.series)
    if (p.t >= 100) {
      ++expected;
      if (p.N > 0) ++positive;
    }
  const bool all_positive = positive == expected;

  ScalingFit fit = fit_scaling(data.series);
  const bool slope_ok =
      !fit.insufficient_holes && fit.n_fit.slope >= 0.65 && fit.n_fit.slope <= 1.35;
  const bool time_ok = data.seconds < 1200;

  out.pass = all_positive && slope_ok && time_ok;
  std::ostringstream os;
  os << " N>0 at t>=100: " << positive << "/" << expected
     << "; slope_N=" << std::round(fit.n_fit.slope * 1000) / 1000 << " in [0.65,1.35]; sweep "
     << std::round(data.seconds) << "s < 1200s";
  out.detail = os.str();
  return out;
}

Outcome criterion4_max_hole(const SweepData& data) {
  Outcome out;
  int m_positive = 0, expected = 0;
  std::map<double, std::pair<double, int>> mean_m;
  std::map<double, double> max_ratio;
  for (const SeriesPoint& p : data.series) {
    if (p.t >= 100) {
      ++expected;
      if (p.M >= 1) ++m_positive;
    }
    mean_m[p.t].first += p.M;
    mean_m[p.t].second += 1;
    max_ratio[p.t] = std::max(max_ratio[p.t], p.M / (p.t * std::log(p.t)));
  }
  bool nondecreasing = true;
  double prev = -1;
  for (auto& [t, acc] : mean_m) {
    const double m = acc.first / acc.second;
    if (m < prev) nondecreasing = false;
    prev = m;
  }
  double worst_ratio = 0;
  for (auto& [t, r] : max_ratio) worst_ratio = std::max(worst_ratio, r);

  out.pass = (m_positive == expected) && nondecreasing && worst_ratio < 1.0;
  std::ostringstream os;
  os << " M>=1 at t>=100: " << m_positive << "/" << expected
     << "; mean M nondecreasing: " << (nondecreasing ? "yes" : "NO")
     << "; fitted C = max M/(t log t) = " << std::round(worst_ratio * 1e4) / 1e4 << " < 1";
  out.detail = os.str();
  return out;
}

Outcome criterion5_plant() {
  // constant-n regime at the smallest n satisfying the hypothesis chain at
  // eps = 0.1; the corridor level a = 1.5 outruns the wrap-around detour
  // behind the planted box while the regrown ball stays within memory
  Outcome out;
  const int n = 1000;
  const double a = 1.5, b = 3.0, eps = 0.1, b_prime = 6.0, t = 60.0;
  BarrelSpec spec = BarrelSpec::make(n, a, b, eps);

  int plants = 0, formed = 0;
  std::ostringstream os;
  os << " n=" << n << " a=" << a << " b=" << b << " t=" << t << ";";
  for (uint64_t seed = 1; seed <= 12 && plants < 5; ++seed) {
    WeightField field(2, WeightDistribution::exponential(1.0), seed);
    Ball ball(field, Vertex::zero(2), GrowthLimits{55'000'000});
    ball.grow_to(t);
    const int inflation = n + int(std::sqrt(double(n))) + 2;
    ScanResult scan = scan_good_vertices(ball, b_prime, n, inflation);
    if (scan.certificates.empty()) continue;
    PlantLog log;
    PlantReport rep =
        plant_and_verify_hole(ball, scan.certificates.front(), spec, BandMode::max_extremal, log);
    ++plants;
    bool volume_ok = true;
    for (uint64_t sz : rep.component_sizes)
      if (double(sz) < rep.min_volume_required) volume_ok = false;
    if (rep.hole_formed && volume_ok) ++formed;
    os << " seed " << seed << ": formed=" << rep.hole_formed << " sizes=(";
    for (size_t i = 0; i < rep.component_sizes.size(); ++i)
      os << (i ? "," : "") << rep.component_sizes[i];
    os << ");";
  }
  out.pass = plants >= 5 && formed == plants;
  os << " " << formed << "/" << plants << " plants formed in the full window";
  out.detail = os.str();
  return out;
}

Outcome criterion6_shape() {
  Outcome out;
  std::ostringstream os;

  // deterministic weights: g-hat is the l1 norm exactly, zero variance
  bool exact_ok = true;
  {
    FieldParams params{2, WeightDistribution::constant(1.0), 1};
    std::vector<Vertex> dirs = {Vertex(1, 0), Vertex(0, 1), Vertex(1, 1), Vertex(2, 1),
                                Vertex(-1, 2)};
    ShapeEstimate est = estimate_shape(params, dirs, 200.0, 3);
    for (const auto& de : est.directions) {
      const double expected = double(de.direction.l1()) / de.unit_norm;
      if (de.g_hat != expected || de.std_error != 0.0) exact_ok = false;
    }
  }
  os << " unit weights exact l1: " << (exact_ok ? "yes" : "NO") << ";";

  FieldParams params{2, WeightDistribution::exponential(1.0), 101};
  ShapeEstimate est = estimate_shape(params, {Vertex(1, 0), Vertex(0, 1)}, 400.0, 30);
  const auto& e1 = est.directions[0];
  const auto& e2 = est.directions[1];
  const double gap = std::abs(e1.g_hat - e2.g_hat);
  const double band = 3 * (e1.std_error + e2.std_error);
  const bool sym_ok = gap <= band;
  os << " |g(e1)-g(e2)|=" << std::round(gap * 1e4) / 1e4
     << " <= 3*combined se=" << std::round(band * 1e4) / 1e4;

  out.pass = exact_ok && sym_ok;
  out.detail = os.str();
  return out;
}

Outcome criterion7_concentration() {
  Outcome out;
  FieldParams params{2, WeightDistribution::exponential(1.0), 301};
  ConcentrationReport rep =
      concentration_probe(params, Vertex(1, 0), {50, 100, 200, 400}, 50, {1, 2, 3});
  const bool chi_ok = !rep.degenerate && rep.chi < 0.6;
  bool exceed_ok = true;
  double prev = 2.0;
  for (const auto& row : rep.rows) {
    const double frac = row.exceed_fraction[2];  // C = 3
    if (frac > prev) exceed_ok = false;
    prev = frac;
  }
  out.pass = chi_ok && exceed_ok;
  std::ostringstream os;
  os << " chi=" << std::round(rep.chi * 1000) / 1000 << " < 0.6; exceedance(C=3) by r:";
  for (const auto& row : rep.rows) os << " " << row.exceed_fraction[2];
  os << (exceed_ok ? " (nonincreasing)" : " (NOT nonincreasing)");
  out.detail = os.str();
  return out;
}

Outcome criterion8_kesten() {
  Outcome out;
  std::ostringstream os;

  FieldParams uni{2, WeightDistribution::uniform(0.0, 1.0), 501};
  KestenReport rep1 = kesten_probe(uni, 10, 200, true);
  bool positive = true;
  for (double r : rep1.min_ratios)
    if (!(r > 0)) positive = false;
  os << " uniform(0,1) n=10: min ratio " << rep1.overall_min
     << " > 0 in 200/200 configs: " << (positive ? "yes" : "NO") << ";";

  FieldParams se{2, WeightDistribution::shifted_exponential(0.5, 1.0), 601};
  KestenReport rep2 = kesten_probe(se, 10, 200, true);
  bool bounded = true;
  for (double r : rep2.min_ratios)
    if (!(r >= 0.5)) bounded = false;
  os << " shifted-exp(0.5,1): min ratio " << rep2.overall_min
     << " >= 0.5 exactly: " << (bounded ? "yes" : "NO");

  out.pass = positive && bounded;
  out.detail = os.str();
  return out;
}

Outcome criterion9_sector(const SweepData& data) {
  Outcome out;
  std::ostringstream os;
  os << " containment frequency:";
  double prev = -1;
  bool nondecreasing = true;
  for (const auto& [t, cf] : data.sector_freq) {
    const double freq = cf.second ? double(cf.first) / cf.second : 0.0;
    os << " t=" << t << ": " << cf.first << "/" << cf.second << ";";
    if (freq < prev) nondecreasing = false;
    prev = freq;
  }
  out.pass = nondecreasing && !data.sector_freq.empty();
  os << (nondecreasing ? " nondecreasing" : " NOT nondecreasing");
  out.detail = os.str();
  return out;
}

}  // namespace

int main() {
  std::printf("acceptance criteria (%s)\n", kVersionTag);
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("CRITERION %d (%s): %s —%s\n", id, name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  report(1, "barrel lemma, deterministic", criterion1_barrel());
  report(2, "oracle equivalence", criterion2_oracles());

  SweepData sweep = run_sweep();
  report(3, "hole scaling", criterion3_hole_scaling(sweep));
  report(4, "max-hole bounds", criterion4_max_hole(sweep));
  report(5, "planted hole", criterion5_plant());
  report(6, "shape sanity", criterion6_shape());
  report(7, "concentration probe", criterion7_concentration());
  report(8, "kesten probe", criterion8_kesten());
  report(9, "sector containment", criterion9_sector(sweep));

  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
