#include "fpp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fpp {

FitLine least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  FitLine f;
  const size_t n = xs.size();
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (size_t i = 0; i < n; ++i) {
    const double pred = f.slope * xs[i] + f.intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// shape
// ---------------------------------------------------------------------------

ShapeEstimate estimate_shape(const FieldParams& params, const std::vector<Vertex>& directions,
                             double r_max, int replicas, GrowthLimits limits) {
  if (directions.empty()) throw std::invalid_argument("estimate_shape: no directions");
  ShapeEstimate est;
  est.replicas = replicas;
  est.radii_used = {r_max / 4, r_max / 2, r_max};

  struct Target {
    size_t dir_index;
    size_t radius_index;
    Vertex vertex;
    double radius;  // k * ||dir||_2
  };
  std::vector<Target> targets;
  for (size_t di = 0; di < directions.size(); ++di) {
    const Vertex& dir = directions[di];
    const double nd = dir.l2();
    if (nd == 0) throw std::invalid_argument("estimate_shape: zero direction");
    for (size_t ri = 0; ri < est.radii_used.size(); ++ri) {
      const int64_t k = std::max<int64_t>(1, int64_t(std::floor(est.radii_used[ri] / nd)));
      Vertex v = Vertex::zero(params.dim);
      for (int i = 0; i < params.dim; ++i) v.c[i] = int32_t(k * dir.c[i]);
      targets.push_back({di, ri, v, double(k) * nd});
    }
  }

  // accumulate per (direction, radius): mean and variance over replicas
  std::vector<std::vector<double>> sums(directions.size(),
                                        std::vector<double>(est.radii_used.size(), 0));
  std::vector<std::vector<double>> sums2 = sums;

  for (int rep = 0; rep < replicas; ++rep) {
    WeightField field(params.dim, params.distribution, params.base_seed + uint64_t(rep));
    Ball ball(field, Vertex::zero(params.dim), limits);
    for (const Target& tg : targets) {
      const double t = ball.passage_time(tg.vertex);
      const double val = t / tg.radius;
      sums[tg.dir_index][tg.radius_index] += val;
      sums2[tg.dir_index][tg.radius_index] += val * val;
    }
  }

  const size_t last = est.radii_used.size() - 1;
  for (size_t di = 0; di < directions.size(); ++di) {
    DirectionEstimate de;
    de.direction = directions[di];
    de.unit_norm = directions[di].l2();
    for (size_t ri = 0; ri < est.radii_used.size(); ++ri)
      de.per_radius_mean.push_back(sums[di][ri] / replicas);
    de.g_hat = de.per_radius_mean[last];
    if (replicas > 1) {
      const double mean = de.g_hat;
      const double var =
          std::max(0.0, sums2[di][last] / replicas - mean * mean) * replicas / (replicas - 1.0);
      de.std_error = std::sqrt(var / replicas);
    }
    est.directions.push_back(std::move(de));
  }

  // euclidean radii of { g_hat <= 1 }: a probed direction u with value g has
  // the boundary point u/g at euclidean radius 1/g
  double rin = kInfTime, rout = 0;
  for (const auto& de : est.directions) {
    if (de.g_hat <= 0) continue;
    const double r = 1.0 / de.g_hat;
    rin = std::min(rin, r);
    rout = std::max(rout, r);
  }
  est.in_radius = rin == kInfTime ? 0 : rin;
  est.out_radius = rout;
  return est;
}

GNorm ShapeEstimate::to_gnorm() const {
  GNorm g;
  for (const auto& de : directions) {
    if (de.direction.dim != 2) throw std::invalid_argument("to_gnorm: d = 2 only");
    const double n = de.unit_norm;
    g.unit_dirs.push_back({de.direction.c[0] / n, de.direction.c[1] / n});
    g.values.push_back(de.g_hat);
  }
  return g;
}

// ---------------------------------------------------------------------------
// scaling fits
// ---------------------------------------------------------------------------

namespace {

// mean N and M per t over an arbitrary subset of seeds
void series_means(const std::vector<SeriesPoint>& series, const std::vector<uint64_t>& seeds,
                  std::vector<double>& ts, std::vector<double>& mean_n,
                  std::vector<double>& mean_m) {
  std::map<double, std::pair<double, int>> accN, accM;
  FlatMap<char> seed_set(seeds.size() * 2 + 8);
  for (uint64_t s : seeds) seed_set.insert_or_assign(s, 1);
  for (const SeriesPoint& p : series) {
    if (!seed_set.contains(p.seed)) continue;
    accN[p.t].first += p.N;
    accN[p.t].second += 1;
    accM[p.t].first += p.M;
    accM[p.t].second += 1;
  }
  ts.clear();
  mean_n.clear();
  mean_m.clear();
  for (const auto& [t, nm] : accN) {
    ts.push_back(t);
    mean_n.push_back(nm.first / nm.second);
    mean_m.push_back(accM[t].first / accM[t].second);
  }
}

}  // namespace

ScalingFit fit_scaling(const std::vector<SeriesPoint>& series) {
  ScalingFit fit;
  std::vector<uint64_t> seeds;
  for (const SeriesPoint& p : series) seeds.push_back(p.seed);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  series_means(series, seeds, fit.t_values, fit.mean_N, fit.mean_M);
  if (fit.t_values.size() < 2) throw std::invalid_argument("fit_scaling: need >= 2 t values");

  bool any_holes = false;
  for (double n : fit.mean_N)
    if (n > 0) any_holes = true;
  if (!any_holes) {
    fit.insufficient_holes = true;
    return fit;
  }

  // N fit on log-log coordinates
  {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < fit.t_values.size(); ++i) {
      if (fit.mean_N[i] <= 0) continue;
      lx.push_back(std::log(fit.t_values[i]));
      ly.push_back(std::log(fit.mean_N[i]));
    }
    fit.n_fit = least_squares(lx, ly);
  }

  // CI by seed-level bootstrap (deterministic resampling)
  {
    const int B = 200;
    std::vector<double> slopes;
    std::vector<uint64_t> resample(seeds.size());
    for (int b = 0; b < B; ++b) {
      for (size_t i = 0; i < seeds.size(); ++i) {
        const uint64_t h = mix64(0x9e37u + uint64_t(b) * 1315423911u + i);
        resample[i] = seeds[h % seeds.size()];
      }
      // repeats in the resample carry weight, so accumulate per picked seed
      std::map<double, std::pair<double, int>> accN;
      for (uint64_t s : resample)
        for (const SeriesPoint& p : series)
          if (p.seed == s) {
            accN[p.t].first += p.N;
            accN[p.t].second += 1;
          }
      std::vector<double> lt, ln;
      for (auto& [t, nm] : accN) {
        const double mean = nm.first / nm.second;
        if (mean > 0) {
          lt.push_back(std::log(t));
          ln.push_back(std::log(mean));
        }
      }
      if (lt.size() >= 2) slopes.push_back(least_squares(lt, ln).slope);
    }
    if (!slopes.empty()) {
      std::sort(slopes.begin(), slopes.end());
      fit.slope_ci_lo = slopes[size_t(0.025 * (slopes.size() - 1))];
      fit.slope_ci_hi = slopes[size_t(0.975 * (slopes.size() - 1))];
    }
  }

  // M models, residuals compared in original M units
  {
    std::vector<double> lt, m, loglog, tlog;
    for (size_t i = 0; i < fit.t_values.size(); ++i) {
      lt.push_back(std::log(fit.t_values[i]));
      m.push_back(fit.mean_M[i]);
      loglog.push_back(std::log(std::log(fit.t_values[i])));
      tlog.push_back(fit.t_values[i] * std::log(fit.t_values[i]));
    }
    auto through_origin = [](const std::vector<double>& x, const std::vector<double>& y) {
      double sxy = 0, sxx = 0;
      for (size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
      }
      return sxx > 0 ? sxy / sxx : 0.0;
    };
    auto rss = [&](auto&& pred) {
      double s = 0;
      for (size_t i = 0; i < m.size(); ++i) {
        const double e = m[i] - pred(i);
        s += e * e;
      }
      return s;
    };
    fit.m_fit.coef_log = through_origin(lt, m);
    fit.m_fit.rss_log = rss([&](size_t i) { return fit.m_fit.coef_log * lt[i]; });

    {
      std::vector<double> lm;
      bool ok = true;
      for (double v : m) {
        if (v <= 0) ok = false;
        lm.push_back(v > 0 ? std::log(v) : 0);
      }
      fit.m_fit.exponent_loglog = ok ? through_origin(loglog, lm) : 0;
      fit.m_fit.rss_loglog =
          rss([&](size_t i) { return std::pow(std::exp(loglog[i]), fit.m_fit.exponent_loglog); });
    }
    fit.m_fit.coef_tlog = through_origin(tlog, m);
    fit.m_fit.rss_tlog = rss([&](size_t i) { return fit.m_fit.coef_tlog * tlog[i]; });

    fit.m_fit.best = 0;
    double best = fit.m_fit.rss_log;
    if (fit.m_fit.rss_loglog < best) {
      best = fit.m_fit.rss_loglog;
      fit.m_fit.best = 1;
    }
    if (fit.m_fit.rss_tlog < best) fit.m_fit.best = 2;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// straightness
// ---------------------------------------------------------------------------

StraightnessReport straightness_probe(const FieldParams& params, const std::vector<double>& radii,
                                      double p, int seeds, int samples_per_radius,
                                      GrowthLimits limits) {
  if (!(p > 0 && p < 0.5)) throw std::invalid_argument("straightness_probe: p in (0, 1/2)");
  if (params.dim != 2) throw std::invalid_argument("straightness_probe: d = 2 only");
  StraightnessReport rep;
  rep.p = p;

  for (int s = 0; s < seeds; ++s) {
    WeightField field(params.dim, params.distribution, params.base_seed + uint64_t(s));
    Ball ball(field, Vertex::zero(params.dim), limits);
    const double rmax = *std::max_element(radii.begin(), radii.end());
    // settle out to twice the largest probe radius (in graph distance the
    // targets below stay within reach of the growing frontier)
    for (double r : radii) {
      // deterministic sample of settled vertices near euclidean radius r:
      // walk the ring of |x|_2 in [r, r+1) in lex order and take every
      // (ring/samples)-th vertex
      std::vector<Vertex> ring;
      const int32_t R = int32_t(std::ceil(r + 1));
      for (int32_t x = -R; x <= R; ++x) {
        const double rem = r * r - double(x) * double(x);
        if (rem < 0) continue;
        const int32_t y0 = int32_t(std::floor(std::sqrt(rem)));
        for (int32_t y : {y0, -y0}) {
          Vertex v(x, y);
          const double n2 = v.l2();
          if (n2 >= r - 1 && n2 <= r + 1 && v.l1() > 0) ring.push_back(v);
        }
      }
      std::sort(ring.begin(), ring.end());
      ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
      if (ring.empty()) continue;
      const size_t step = std::max<size_t>(1, ring.size() / size_t(samples_per_radius));

      int taken = 0;
      for (size_t i = 0; i < ring.size() && taken < samples_per_radius; i += step, ++taken) {
        const Vertex x = ring[i];
        ball.passage_time(x);
        // probe ring at 2 ||x||_2
        const double pr = 2 * x.l2();
        std::vector<Vertex> probe;
        const int32_t PR = int32_t(std::ceil(pr + 1));
        for (int32_t px = -PR; px <= PR; ++px) {
          const double rem = pr * pr - double(px) * double(px);
          if (rem < 0) continue;
          const int32_t py0 = int32_t(std::floor(std::sqrt(rem)));
          for (int32_t py : {py0, -py0}) {
            Vertex v(px, py);
            const double n2 = v.l2();
            if (n2 >= pr - 1 && n2 <= pr + 1) probe.push_back(v);
          }
        }
        std::sort(probe.begin(), probe.end());
        probe.erase(std::unique(probe.begin(), probe.end()), probe.end());

        const std::vector<Vertex> outs = ball.out_set(x, probe);
        StraightnessRow row;
        row.seed = params.base_seed + uint64_t(s);
        row.radius = r;
        row.x = x;
        row.out_count = outs.size();
        for (const Vertex& z : outs) {
          double ang = 0;
          {
            const double nx = x.l2(), nz = z.l2();
            if (nx > 0 && nz > 0) {
              double c = (double(x.c[0]) * z.c[0] + double(x.c[1]) * z.c[1]) / (nx * nz);
              ang = std::acos(std::clamp(c, -1.0, 1.0));
            }
          }
          row.max_angle = std::max(row.max_angle, ang);
        }
        rep.rows.push_back(row);
      }
    }
    (void)rmax;
  }

  // log-log fit of mean max-angle vs radius
  std::map<double, std::pair<double, int>> acc;
  for (const auto& row : rep.rows)
    if (row.max_angle > 0) {
      acc[row.radius].first += row.max_angle;
      acc[row.radius].second += 1;
    }
  std::vector<double> lx, ly;
  for (auto& [r, v] : acc) {
    lx.push_back(std::log(r));
    ly.push_back(std::log(v.first / v.second));
  }
  rep.loglog_slope = lx.size() >= 2 ? least_squares(lx, ly).slope : 0;
  return rep;
}

// ---------------------------------------------------------------------------
// kesten probe
// ---------------------------------------------------------------------------

namespace {

// dense local weight cache over the box [-range, range]^2 (d = 2) or a hash
// map in higher dimensions
struct LocalWeights {
  const WeightField& field;
  int range;
  std::vector<double> cache;  // d=2 only: ((2r+1)^2) * 2 axes
  bool dense;

  LocalWeights(const WeightField& f, int r) : field(f), range(r), dense(f.dim() == 2) {
    if (dense) {
      const int side = 2 * r + 2;
      cache.assign(size_t(side) * side * 2, -1);
      for (int x = -r; x <= r; ++x)
        for (int y = -r; y <= r; ++y)
          for (int axis = 0; axis < 2; ++axis) {
            Vertex v(x, y);
            cache[idx(v, axis)] = field.weight(Edge(v, axis));
          }
    }
  }
  size_t idx(const Vertex& v, int axis) const {
    const int side = 2 * range + 2;
    return ((size_t(v.c[0] + range) * side) + size_t(v.c[1] + range)) * 2 + axis;
  }
  double get(const Vertex& v, int axis) const {
    if (dense && std::abs(v.c[0]) <= range && std::abs(v.c[1]) <= range) {
      const double w = cache[idx(v, axis)];
      if (w >= 0) return w;
    }
    return field.weight(Edge(v, axis));
  }
};

// enumerate edge-self-avoiding arm extensions; edges marked in `used`
void enumerate_arms(const LocalWeights& lw, FlatMap<char>& used, Vertex v, int remaining,
                    double acc, const std::function<void(double)>& leaf) {
  if (remaining == 0) {
    leaf(acc);
    return;
  }
  const int dim = v.dim;
  for (int axis = 0; axis < dim; ++axis)
    for (int sign = -1; sign <= 1; sign += 2) {
      Vertex u = v.shifted(axis, sign);
      const Edge e = sign > 0 ? Edge(v, axis) : Edge(u, axis);
      const uint64_t key = pack_edge(e);
      if (const char* f = used.find(key); f && *f) continue;
      used[key] = 1;
      enumerate_arms(lw, used, u, remaining - 1, acc + lw.get(e.base, e.axis), leaf);
      used[key] = 0;
    }
}

}  // namespace

KestenReport kesten_probe(const FieldParams& params, int n, int samples, bool exact) {
  if (exact && n > 12) throw std::invalid_argument("kesten_probe: exact mode requires n <= 12");
  if (n < 1) throw std::invalid_argument("kesten_probe: n >= 1");
  KestenReport rep;
  rep.n = n;
  rep.exact = exact;

  for (int s = 0; s < samples; ++s) {
    WeightField field(params.dim, params.distribution, params.base_seed + uint64_t(s));
    double best = kInfTime;
    if (exact) {
      LocalWeights lw(field, n + 2);
      const Vertex origin = Vertex::zero(params.dim);
      // a path through the origin splits into two edge-disjoint arms; the
      // second arm is enumerated inside each leaf of the first
      FlatMap<char> used(1 << 10);
      // a path reversal swaps the arm lengths, so k <= n/2 covers every
      // path's weight
      for (int k = 0; k <= n / 2; ++k) {
        const int k2 = n - k;
        if (k == 0) {
          enumerate_arms(lw, used, origin, k2, 0,
                         [&](double acc) { best = std::min(best, acc); });
        } else {
          std::function<void(double)> second_arm = [&](double acc1) {
            enumerate_arms(lw, used, origin, k2, acc1,
                           [&](double acc) { best = std::min(best, acc); });
          };
          enumerate_arms(lw, used, origin, k, 0, second_arm);
        }
      }
    } else {
      // greedy cheap extension from both ends
      Vertex head = Vertex::zero(params.dim), tail = head;
      FlatMap<char> used(1 << 8);
      double total = 0;
      for (int step = 0; step < n; ++step) {
        double bw = kInfTime;
        Vertex bv;
        Edge be;
        bool head_side = true;
        for (bool hs : {true, false}) {
          const Vertex v = hs ? head : tail;
          for (int axis = 0; axis < params.dim; ++axis)
            for (int sign = -1; sign <= 1; sign += 2) {
              Vertex u = v.shifted(axis, sign);
              const Edge e = sign > 0 ? Edge(v, axis) : Edge(u, axis);
              if (used.contains(pack_edge(e)) && *used.find(pack_edge(e))) continue;
              const double w = field.weight(e);
              if (w < bw) {
                bw = w;
                bv = u;
                be = e;
                head_side = hs;
              }
            }
        }
        used[pack_edge(be)] = 1;
        total += bw;
        if (head_side)
          head = bv;
        else
          tail = bv;
      }
      best = total;
    }
    rep.min_ratios.push_back(best / n);
  }

  rep.overall_min = *std::min_element(rep.min_ratios.begin(), rep.min_ratios.end());
  std::vector<double> sorted = rep.min_ratios;
  std::sort(sorted.begin(), sorted.end());
  rep.percentile_1 = sorted[size_t(0.01 * (sorted.size() - 1))];
  return rep;
}

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

ConcentrationReport concentration_probe(const FieldParams& params, const Vertex& direction,
                                        const std::vector<double>& radii, int replicas,
                                        const std::vector<double>& c_sweep, GrowthLimits limits) {
  ConcentrationReport rep;
  rep.c_sweep = c_sweep;
  rep.replicas = replicas;
  const double nd = direction.l2();
  if (nd == 0) throw std::invalid_argument("concentration_probe: zero direction");

  // targets: exact multiples k*dir nearest to each requested radius
  std::vector<Vertex> targets;
  std::vector<double> target_radii;
  for (double r : radii) {
    const int64_t k = std::max<int64_t>(1, int64_t(std::llround(r / nd)));
    Vertex v = Vertex::zero(params.dim);
    for (int i = 0; i < params.dim; ++i) v.c[i] = int32_t(k * direction.c[i]);
    targets.push_back(v);
    target_radii.push_back(double(k) * nd);
  }

  std::vector<std::vector<double>> values(targets.size());
  for (int rep_i = 0; rep_i < replicas; ++rep_i) {
    WeightField field(params.dim, params.distribution, params.base_seed + uint64_t(rep_i));
    Ball ball(field, Vertex::zero(params.dim), limits);
    for (size_t i = 0; i < targets.size(); ++i)
      values[i].push_back(ball.passage_time(targets[i]));
  }

  // g estimate per radius from the largest radius: g_hat per unit = mean at
  // largest radius / largest radius
  const size_t last = targets.size() - 1;
  double mean_last = 0;
  for (double v : values[last]) mean_last += v;
  mean_last /= replicas;
  const double g_unit = mean_last / target_radii[last];

  std::vector<double> lx, ly;
  for (size_t i = 0; i < targets.size(); ++i) {
    ConcentrationRow row;
    row.radius = target_radii[i];
    double s = 0, s2 = 0;
    for (double v : values[i]) {
      s += v;
      s2 += v * v;
    }
    row.mean = s / replicas;
    const double var = std::max(0.0, s2 / replicas - row.mean * row.mean) * replicas /
                       std::max(1, replicas - 1);
    row.stddev = std::sqrt(var);
    row.g_hat = g_unit * target_radii[i];
    const double env = std::sqrt(std::max(1e-12, row.g_hat * std::log(std::max(1.001, row.g_hat))));
    for (double c : c_sweep) {
      int count = 0;
      for (double v : values[i])
        if (std::abs(v - row.g_hat) > c * env) ++count;
      row.exceed_fraction.push_back(double(count) / replicas);
    }
    // radial difference rate: min over replicas of (T(r_i) - T(r_{i-1})) gap
    if (i > 0) {
      double mn = kInfTime;
      for (int r = 0; r < replicas; ++r)
        mn = std::min(mn, (values[i][r] - values[i - 1][r]) /
                              (target_radii[i] - target_radii[i - 1]));
      row.min_radial_rate = mn;
    }
    if (row.stddev > 0) {
      lx.push_back(std::log(row.radius));
      ly.push_back(std::log(row.stddev));
    }
    rep.rows.push_back(std::move(row));
  }
  if (lx.size() >= 2)
    rep.chi = least_squares(lx, ly).slope;
  else
    rep.degenerate = true;
  return rep;
}

}  // namespace fpp
