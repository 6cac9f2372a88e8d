#include "fpp/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fpp {

namespace {

constexpr double kGridScale = 0x1p20;  // ticks per time unit

int64_t floor_ticks(double x) {
  int64_t t = llround(x * kGridScale);
  if (double(t) / kGridScale > x) --t;
  return t;
}
int64_t ceil_ticks(double x) {
  int64_t t = llround(x * kGridScale);
  if (double(t) / kGridScale < x) ++t;
  return t;
}

struct Bands {
  int64_t low_lo, low_hi, high_lo, high_hi;
};

Bands band_ticks(const BarrelSpec& s) {
  Bands b{};
  b.low_lo = ceil_ticks(s.a - s.delta);
  b.low_hi = floor_ticks(s.a);
  b.high_lo = ceil_ticks(s.b);
  b.high_hi = floor_ticks(2 * s.b);
  if (b.low_lo > b.low_hi) b.low_lo = b.low_hi;
  if (b.high_lo > b.high_hi) b.high_lo = b.high_hi;
  return b;
}

int64_t sample_in(int64_t lo, int64_t hi, uint64_t h) {
  if (hi <= lo) return lo;
  return lo + int64_t(h % uint64_t(hi - lo + 1));
}

void validate_common(int n, double a, double b, double eps) {
  if (n < 1) throw std::invalid_argument("BarrelSpec: n >= 1 required");
  if (!(a > 0 && a < b)) throw std::invalid_argument("BarrelSpec: 0 < a < b required");
  const double eps_max = (b - a) / (2 * b + 3 * a);
  if (!(eps > 0 && eps < eps_max))
    throw std::invalid_argument("BarrelSpec: eps must be in (0, (b-a)/(2b+3a))");
  const double delta = eps * eps * eps * eps;
  if (delta < kWeightGrid)
    throw std::invalid_argument("BarrelSpec: delta = eps^4 below the weight grid resolution");
}

BarrelSpec build(int n, double a, double b, double eps) {
  BarrelSpec s;
  s.n = n;
  s.a = a;
  s.b = b;
  s.eps = eps;
  s.delta = eps * eps * eps * eps;
  s.m1 = int(std::floor(eps * n));
  s.m3 = int(std::floor(eps * s.m1));
  s.m2 = int(std::floor(eps * s.m3));
  s.L = int(std::floor(eps * s.m2));
  // flooring already gives m2 <= eps m3 <= eps^2 m1 <= eps^3 n in the reals,
  // so the hypothesis chain reduces to the first inequality
  s.chain_ok = s.m2 >= 1;
  return s;
}

}  // namespace

BarrelSpec BarrelSpec::make(int n, double a, double b, double eps) {
  validate_common(n, a, b, eps);
  BarrelSpec s = build(n, a, b, eps);
  if (!s.chain_ok)
    throw std::invalid_argument(
        "BarrelSpec: floored sizes violate 1 <= m2 <= eps*m3 <= eps^2*m1 <= eps^3*n "
        "(n = " + std::to_string(n) + ", eps needs eps^3*n >= 1)");
  return s;
}

BarrelSpec BarrelSpec::make_relaxed(int n, double a, double b, double eps) {
  validate_common(n, a, b, eps);
  return build(n, a, b, eps);
}

double BarrelSpec::kappa() const {
  const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps;
  return e4 * n + a * (n + 2 * e2 * n) + a * e3 * n;
}

double BarrelSpec::window_width() const {
  const double e4 = eps * eps * eps * eps;
  return e4 * n;
}

std::vector<Vertex> BarrelGeometry::region() const {
  std::vector<Vertex> out;
  Vertex v = Vertex::zero(dim);
  // enumerate x0 in [-m1, m2], side coords with |sum| <= m3
  std::function<void(int)> rec = [&](int axis) {
    if (axis == dim) {
      if (in_region(v)) out.push_back(v);
      return;
    }
    const int lim = (axis == 0) ? std::max(spec.m1, spec.m2) : spec.m3;
    const int lo = (axis == 0) ? -spec.m1 : -lim;
    const int hi = (axis == 0) ? spec.m2 : lim;
    for (int c = lo; c <= hi; ++c) {
      v.c[axis] = c;
      rec(axis + 1);
    }
    v.c[axis] = 0;
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vertex> BarrelGeometry::interior_boundary() const {
  std::vector<Vertex> out;
  for (const Vertex& v : region())
    if (on_interior_boundary(v)) out.push_back(v);
  return out;
}

std::vector<Vertex> BarrelGeometry::line() const {
  std::vector<Vertex> out;
  for (int k = -spec.n; k <= -spec.m1; ++k) {
    Vertex v = Vertex::zero(dim);
    v.c[0] = k;
    out.push_back(v);
  }
  return out;
}

namespace {

// enumerate all vertices of Lambda(n), lex order
void for_each_lambda(int n, int dim, const std::function<void(const Vertex&)>& f) {
  Vertex v = Vertex::zero(dim);
  std::function<void(int, int64_t)> rec = [&](int axis, int64_t used) {
    if (axis == dim) {
      f(v);
      return;
    }
    const int64_t budget = n - used;
    for (int64_t c = -budget; c <= budget; ++c) {
      v.c[axis] = int32_t(c);
      rec(axis + 1, used + std::abs(c));
    }
    v.c[axis] = 0;
  };
  rec(0, 0);
}

int64_t edge_band_ticks(const BarrelGeometry& geo, const Bands& bands, BandMode mode,
                        uint64_t sample_seed, const Edge& e) {
  const bool corridor = geo.in_corridor(e.base) && geo.in_corridor(e.other());
  int64_t lo = corridor ? bands.low_lo : bands.high_lo;
  int64_t hi = corridor ? bands.low_hi : bands.high_hi;
  switch (mode) {
    case BandMode::min_extremal: return lo;
    case BandMode::max_extremal: return hi;
    case BandMode::sampled:
      return sample_in(lo, hi, mix64(pack_edge(e) ^ mix64(sample_seed ^ 0x5bd1e995u)));
  }
  return lo;
}

}  // namespace

std::vector<std::pair<Edge, double>> en_overrides(const BarrelSpec& spec, int dim, BandMode mode,
                                                  uint64_t sample_seed) {
  BarrelGeometry geo(spec, dim);
  const Bands bands = band_ticks(spec);
  std::vector<std::pair<Edge, double>> out;
  for_each_lambda(spec.n, dim, [&](const Vertex& v) {
    for (int axis = 0; axis < dim; ++axis) {
      Vertex u = v.shifted(axis, 1);
      if (u.l1() > spec.n) continue;
      Edge e(v, axis);
      const int64_t t = edge_band_ticks(geo, bands, mode, sample_seed, e);
      out.emplace_back(e, double(t) / kGridScale);
    }
  });
  return out;
}

BarrelReport verify_barrel(const BarrelSpec& spec, int dim, BandMode mode, uint64_t sample_seed) {
  BarrelGeometry geo(spec, dim);
  const Bands bands = band_ticks(spec);
  const int n = spec.n;

  auto lambda_member = [n](const Vertex& v) { return v.l1() <= n; };
  auto weight_ticks = [&](const Edge& e) {
    return edge_band_ticks(geo, bands, mode, sample_seed, e);
  };

  // integer-tick Dijkstra restricted to Lambda(n)
  auto distances = [&](const Vertex& src) {
    using HE = std::pair<int64_t, Vertex>;
    auto gt = [](const HE& a, const HE& b) {
      if (a.first != b.first) return a.first > b.first;
      return b.second < a.second;
    };
    std::priority_queue<HE, std::vector<HE>, decltype(gt)> heap(gt);
    FlatMap<int64_t> dist(size_t(4) * n * n);
    FlatMap<int64_t> tent;
    tent.insert_or_assign(pack_vertex(src), 0);
    heap.push({0, src});
    while (!heap.empty()) {
      auto [t, v] = heap.top();
      heap.pop();
      const uint64_t key = pack_vertex(v);
      if (dist.contains(key)) continue;
      const int64_t* best = tent.find(key);
      if (!best || *best != t) continue;
      dist.insert_or_assign(key, t);
      for (int axis = 0; axis < dim; ++axis)
        for (int sign = -1; sign <= 1; sign += 2) {
          Vertex u = v.shifted(axis, sign);
          if (!lambda_member(u)) continue;
          const uint64_t ukey = pack_vertex(u);
          if (dist.contains(ukey)) continue;
          const int64_t nt = t + weight_ticks(sign > 0 ? Edge(v, axis) : Edge(u, axis));
          int64_t* cur = tent.find(ukey);
          if (cur && *cur <= nt) continue;
          tent.insert_or_assign(ukey, nt);
          heap.push({nt, u});
        }
    }
    return dist;
  };

  BarrelReport rep;

  // upper side: T_{Lambda(n)}(-n e1, y) <= a(n + 2 m3) + a m2 for all y in R-hat.
  // The right side is rounded down to the grid, so a pass implies the real
  // inequality; at max-extremal the far corner attains it exactly.
  {
    Vertex start = Vertex::zero(dim);
    start.c[0] = -n;
    FlatMap<int64_t> dist = distances(start);
    const int64_t rhs = bands.low_hi * int64_t(n + 2 * spec.m3) + bands.low_hi * spec.m2;
    int64_t worst = INT64_MAX;
    for (const Vertex& y : geo.interior_boundary()) {
      const int64_t* t = dist.find(pack_vertex(y));
      if (!t) throw std::logic_error("verify_barrel: boundary vertex unreachable");
      ++rep.upper_targets;
      const int64_t slack = rhs - *t;
      if (slack < worst) {
        worst = slack;
        rep.worst_upper = y;
      }
    }
    rep.upper_margin_ticks = worst;
    rep.upper_margin = double(worst) / kGridScale;
    rep.upper_ok = worst >= 0;
  }

  // lower side: T_{Lambda(n)}(x, 0) >= (a - delta)(n + 2 m3) + b m2 for all
  // |x|_1 = n, computed from the origin by symmetry. The right side is
  // rounded up to the grid, so a pass implies the real inequality.
  {
    FlatMap<int64_t> dist = distances(Vertex::zero(dim));
    const int64_t rhs = bands.low_lo * int64_t(n + 2 * spec.m3) + bands.high_lo * spec.m2;
    int64_t worst = INT64_MAX;
    for_each_lambda(n, dim, [&](const Vertex& x) {
      if (x.l1() != n) return;
      const int64_t* t = dist.find(pack_vertex(x));
      if (!t) throw std::logic_error("verify_barrel: sphere vertex unreachable");
      ++rep.lower_targets;
      const int64_t slack = *t - rhs;
      if (slack < worst) {
        worst = slack;
        rep.worst_lower = x;
      }
    });
    rep.lower_margin_ticks = worst;
    rep.lower_margin = double(worst) / kGridScale;
    rep.lower_ok = worst >= 0;
  }

  return rep;
}

// ---------------------------------------------------------------------------
// good-vertex scan
// ---------------------------------------------------------------------------

namespace {

struct DistGrid {
  Box box;
  int dim;
  std::array<int64_t, kMaxDim> stride{};
  int64_t cells = 1;
  std::vector<uint16_t> dist;

  static constexpr uint16_t kUnset = 0xFFFF;

  DistGrid(const Box& b) : box(b), dim(b.dim) {
    for (int i = dim - 1; i >= 0; --i) {
      stride[i] = cells;
      cells *= int64_t(b.hi[i] - b.lo[i] + 1);
    }
    dist.assign(size_t(cells), kUnset);
  }
  int64_t index(const Vertex& v) const {
    int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx += stride[i] * int64_t(v.c[i] - box.lo[i]);
    return idx;
  }
  Vertex vertex(int64_t idx) const {
    Vertex v = Vertex::zero(dim);
    for (int i = 0; i < dim; ++i) {
      v.c[i] = box.lo[i] + int32_t(idx / stride[i]);
      idx %= stride[i];
    }
    return v;
  }
};

}  // namespace

ScanResult scan_good_vertices(const Ball& ball, double b_prime, int n, int window_inflation) {
  if (n < 4) throw std::invalid_argument("scan_good_vertices: n >= 4 required");
  if (n > 30000) throw std::invalid_argument("scan_good_vertices: n beyond the distance grid");
  ScanResult res;
  const int dim = ball.source().dim;
  const std::vector<Vertex> cells = ball.vertices();
  res.ball_volume = cells.size();
  if (cells.empty()) return res;

  Box window = ball.bounding_box();
  window.inflate(window_inflation);
  DistGrid grid(window);

  // multi-source l1 distance-to-ball, capped at n+1, inside the window
  std::deque<int64_t> queue;
  for (const Vertex& v : cells) {
    const int64_t idx = grid.index(v);
    grid.dist[size_t(idx)] = 0;
    queue.push_back(idx);
  }
  while (!queue.empty()) {
    const int64_t idx = queue.front();
    queue.pop_front();
    const uint16_t d0 = grid.dist[size_t(idx)];
    if (d0 >= n + 1) continue;
    const Vertex v = grid.vertex(idx);
    for (int axis = 0; axis < dim; ++axis)
      for (int sign = -1; sign <= 1; sign += 2) {
        Vertex u = v.shifted(axis, sign);
        if (!window.contains(u)) continue;
        const int64_t uidx = grid.index(u);
        if (grid.dist[size_t(uidx)] != DistGrid::kUnset) continue;
        grid.dist[size_t(uidx)] = uint16_t(d0 + 1);
        queue.push_back(uidx);
      }
  }

  const int sqrt_n = int(std::floor(std::sqrt(double(n))));
  std::vector<Vertex> accepted;

  // candidates in lex (= grid index) order with greedy 4n spacing
  for (int64_t idx = 0; idx < grid.cells; ++idx) {
    if (grid.dist[size_t(idx)] != uint16_t(n + 1)) continue;
    const Vertex x = grid.vertex(idx);
    bool spaced = true;
    for (const Vertex& p : accepted)
      if (x.l1_dist(p) < 4 * int64_t(n)) {
        spaced = false;
        break;
      }
    if (!spaced) continue;

    // search for gamma_x from each admissible start, in axis order with the
    // positive sign first
    GoodVertexCertificate cert;
    bool found = false;
    for (int j = 0; j < dim && !found; ++j) {
      for (int sign = 1; sign >= -1 && !found; sign -= 2) {
        Vertex start = x.shifted(j, sign * n);
        if (!window.contains(start)) continue;
        if (grid.dist[size_t(grid.index(start))] == 0) continue;  // in the ball

        // BFS over vertices outside the ball and outside x + Lambda(n-1)
        FlatMap<int64_t> parent(256);  // packed vertex -> packed parent (self for root)
        std::deque<std::pair<Vertex, int>> bfs;
        parent.insert_or_assign(pack_vertex(start), int64_t(pack_vertex(start)));
        bfs.push_back({start, 0});
        while (!bfs.empty() && !found) {
          auto [v, depth] = bfs.front();
          bfs.pop_front();
          // does an edge of weight <= b' lead from v into the ball?
          for (int axis = 0; axis < dim && !found; ++axis)
            for (int sign2 = -1; sign2 <= 1 && !found; sign2 += 2) {
              Vertex w = v.shifted(axis, sign2);
              if (!ball.settled(w)) continue;
              const Edge e = sign2 > 0 ? Edge(v, axis) : Edge(w, axis);
              if (ball.field().weight(e) > b_prime) continue;
              // reconstruct path start -> v
              std::vector<Vertex> path{v};
              Vertex cur = v;
              while (true) {
                const int64_t* p = parent.find(pack_vertex(cur));
                Vertex pv = unpack_vertex(uint64_t(*p), dim);
                if (pv == cur) break;
                path.push_back(pv);
                cur = pv;
              }
              std::reverse(path.begin(), path.end());
              cert = GoodVertexCertificate{x, std::move(path), e, b_prime, n};
              found = true;
            }
          if (found || depth >= sqrt_n) continue;
          for (int axis = 0; axis < dim; ++axis)
            for (int sign2 = -1; sign2 <= 1; sign2 += 2) {
              Vertex u = v.shifted(axis, sign2);
              if (x.l1_dist(u) <= n - 1) continue;       // avoid x + Lambda(n-1)
              if (!window.contains(u)) continue;         // stay in scan window
              if (ball.settled(u)) continue;             // avoid B
              const uint64_t ukey = pack_vertex(u);
              if (parent.contains(ukey)) continue;
              parent.insert_or_assign(ukey, int64_t(pack_vertex(v)));
              bfs.push_back({u, depth + 1});
            }
        }
      }
    }
    if (found) {
      accepted.push_back(x);
      res.certificates.push_back(std::move(cert));
    }
  }

  const double nb = double(res.ball_volume);
  res.density_ratio = double(res.certificates.size()) * std::pow(double(n), dim - 1) /
                      std::pow(nb, double(dim - 1) / dim);
  return res;
}

bool validate_certificate(const Ball& ball, const GoodVertexCertificate& cert, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int dim = ball.source().dim;
  const int n = cert.n;
  if (n < 1) return fail("n < 1");
  if (cert.path.empty()) return fail("empty path");

  // item 1 via the exact l1 distance from x to the ball
  int64_t min_dist = INT64_MAX;
  ball.for_each_settled([&](const Vertex& v, double) {
    const int64_t d = cert.x.l1_dist(v);
    if (d < min_dist) min_dist = d;
  });
  if (min_dist <= n) return fail("x + Lambda(n) intersects the ball");
  if (min_dist > n + 1) return fail("x + Lambda(n+1) does not reach the ball");

  // path start is x +- n e_j
  const Vertex d0 = cert.path.front() - cert.x;
  bool axis_start = false;
  for (int j = 0; j < dim; ++j)
    if (std::abs(d0.c[j]) == n && d0.l1() == n) axis_start = true;
  if (!axis_start) return fail("path does not start at x +- n e_j");

  const int sqrt_n = int(std::floor(std::sqrt(double(n))));
  if (int(cert.path.size()) - 1 > sqrt_n) return fail("path longer than sqrt(n) edges");
  for (size_t i = 0; i < cert.path.size(); ++i) {
    const Vertex& v = cert.path[i];
    if (cert.x.l1_dist(v) <= n - 1) return fail("path enters x + Lambda(n-1)");
    if (ball.settled(v)) return fail("path enters the ball");
    if (i > 0 && cert.path[i - 1].l1_dist(v) != 1) return fail("path not a lattice path");
  }

  const Vertex a = cert.entry_edge.base, b = cert.entry_edge.other();
  const Vertex& last = cert.path.back();
  if (!(a == last || b == last)) return fail("entry edge not incident to path end");
  const Vertex other = (a == last) ? b : a;
  if (!ball.settled(other)) return fail("entry edge does not reach the ball");
  if (ball.field().weight(cert.entry_edge) > cert.b_prime)
    return fail("entry edge weight exceeds b'");
  return true;
}

// ---------------------------------------------------------------------------
// planting
// ---------------------------------------------------------------------------

namespace {

// signed axis rotation with T(-e1) = the unit vector `dir` (= sigma e_j)
struct AxisIsometry {
  int j;
  int sigma;
  Vertex apply(const Vertex& v) const {
    Vertex out = v;
    out.c[0] = v.c[j];
    out.c[j] = -sigma * v.c[0];
    return out;
  }
};

Box plant_box(const Vertex& x, int n) {
  const int r = n + int(std::floor(std::sqrt(double(n)))) + 1;
  Box b = Box::of(x);
  b.inflate(r);
  return b;
}

// true if every vertex of x + Lambda(L) lies in a bounded complement
// component; size receives the component volume when bounded
bool enclosed(Ball& ball, const Vertex& x, int L, uint64_t* size) {
  *size = 0;
  // all of x + Lambda(L) must be unsettled; it is connected, so one BFS from
  // x covers the whole component
  bool inside = true;
  for_each_lambda(L, x.dim, [&](const Vertex& off) {
    Vertex v = x;
    for (int i = 0; i < x.dim; ++i) v.c[i] += off.c[i];
    if (ball.settled(v)) inside = false;
  });
  if (!inside || ball.settled(x)) return false;

  Box box = ball.bounding_box();
  box.inflate(1);
  FlatMap<char> seen(1 << 12);
  std::vector<Vertex> stack{x};
  seen.insert_or_assign(pack_vertex(x), 1);
  uint64_t count = 0;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    ++count;
    for (int axis = 0; axis < x.dim; ++axis)
      for (int sign = -1; sign <= 1; sign += 2) {
        Vertex u = v.shifted(axis, sign);
        if (!box.contains(u)) return false;  // reached the frontier: unbounded
        if (ball.settled(u)) continue;
        const uint64_t k = pack_vertex(u);
        if (seen.contains(k)) continue;
        seen.insert_or_assign(k, 1);
        stack.push_back(u);
      }
  }
  *size = count;
  return true;
}

}  // namespace

PlantReport plant_and_verify_hole(const Ball& ball_at_t, const GoodVertexCertificate& cert,
                                  const BarrelSpec& spec, BandMode mode, PlantLog& log,
                                  uint64_t sample_seed) {
  if (spec.n != cert.n) throw std::invalid_argument("plant: spec.n != cert.n");
  std::string why;
  if (!validate_certificate(ball_at_t, cert, &why))
    throw std::invalid_argument("plant: invalid certificate: " + why);

  const Box box = plant_box(cert.x, cert.n);
  for (const Box& prev : log.boxes)
    if (box.overlaps(prev)) throw std::invalid_argument("plant: box overlaps a previous plant");
  log.boxes.push_back(box);

  const int dim = ball_at_t.source().dim;
  const Vertex d0 = cert.path.front() - cert.x;
  AxisIsometry iso{};
  for (int j = 0; j < dim; ++j)
    if (std::abs(d0.c[j]) == cert.n) {
      iso.j = j;
      iso.sigma = d0.c[j] > 0 ? 1 : -1;
    }

  // image of the barrel configuration inside x + Lambda(n)
  std::vector<std::pair<Edge, double>> overrides = en_overrides(spec, dim, mode, sample_seed);
  for (auto& [e, w] : overrides) {
    Vertex p = cert.x + iso.apply(e.base);
    Vertex q = cert.x + iso.apply(e.other());
    e = Edge::between(p, q);
  }

  // cheap-path condition on gamma_x: its edges get the corridor value
  const Bands bands = band_ticks(spec);
  const int64_t low = (mode == BandMode::max_extremal) ? bands.low_hi : bands.low_lo;
  for (size_t i = 0; i + 1 < cert.path.size(); ++i) {
    int64_t t = low;
    if (mode == BandMode::sampled) {
      const Edge e = Edge::between(cert.path[i], cert.path[i + 1]);
      t = sample_in(bands.low_lo, bands.low_hi, mix64(pack_edge(e) ^ mix64(sample_seed)));
    }
    overrides.emplace_back(Edge::between(cert.path[i], cert.path[i + 1]),
                           double(t) / kGridScale);
  }

  PlantReport rep;
  rep.overrides_applied = overrides.size();
  rep.min_volume_required = std::pow(double(spec.L) / dim, dim);

  const double t0 = ball_at_t.horizon();
  const double kappa = spec.kappa();
  const double width = spec.window_width();
  rep.window_lo = t0 + kappa;
  rep.window_hi = t0 + kappa + width;
  rep.s_values = {t0 + kappa, t0 + kappa + width / 2, t0 + kappa + width};

  // overridden edges have both endpoints outside B(t), so regrowing from the
  // t-state under the new field matches a from-scratch run
  Ball regrown = ball_at_t.with_field(ball_at_t.field().with_overrides(overrides));
  rep.hole_formed = true;
  for (double s : rep.s_values) {
    regrown.grow_to(s);
    uint64_t size = 0;
    const bool ok = enclosed(regrown, cert.x, spec.L, &size);
    rep.formed_at_s.push_back(ok);
    rep.component_sizes.push_back(size);
    if (!ok || double(size) < rep.min_volume_required) rep.hole_formed = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// sectors
// ---------------------------------------------------------------------------

double GNorm::eval(double x, double y) const {
  double best = 0;
  for (size_t i = 0; i < unit_dirs.size(); ++i) {
    const double dot = x * unit_dirs[i][0] + y * unit_dirs[i][1];
    best = std::max(best, values[i] * dot);
  }
  return best;
}

namespace {

double radial_measure(const SectorSpec& s, double x, double y) {
  if (s.mode == SectorNorm::euclidean) return std::sqrt(x * x + y * y);
  return s.gnorm->eval(x, y);
}

double angle_to_center(const SectorSpec& s, double x, double y) {
  const double nv = std::sqrt(x * x + y * y);
  const double nc = std::sqrt(s.x0[0] * s.x0[0] + s.x0[1] * s.x0[1]);
  if (nv == 0 || nc == 0) return 0;
  double c = (x * s.x0[0] + y * s.x0[1]) / (nv * nc);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

SectorSpec sector(const Vertex& x0, double C18) {
  if (x0.dim != 2) throw std::invalid_argument("sector: d = 2 only");
  const double r = x0.l2();
  if (!(r > std::exp(1.0))) throw std::invalid_argument("sector: ||x0||_2 > e required");
  if (!(C18 > 3)) throw std::invalid_argument("sector: C18 > 3 required");
  SectorSpec s;
  s.x0 = {double(x0.c[0]), double(x0.c[1])};
  s.x0_norm = r;
  s.C18 = C18;
  const double lg = std::log(r);
  s.J = std::pow(lg, C18 - 3) / r;
  s.K = std::pow(lg, C18) / r;
  s.mode = SectorNorm::euclidean;
  return s;
}

SectorSpec sector_gnorm(const Vertex& x0, const GNorm& g, double a, double c22, double C35) {
  if (x0.dim != 2) throw std::invalid_argument("sector_gnorm: d = 2 only");
  const double gx = g.eval(double(x0.c[0]), double(x0.c[1]));
  if (!(gx > std::exp(1.0))) throw std::invalid_argument("sector_gnorm: g(x0) > e required");
  SectorSpec s;
  s.x0 = {double(x0.c[0]), double(x0.c[1])};
  s.x0_norm = gx;
  s.C18 = 0;
  s.K = 3 * C35 * std::sqrt(gx * std::log(gx)) / gx;
  s.J = 64.0 / (a * c22) * s.K;
  s.mode = SectorNorm::g_norm;
  s.gnorm = g;
  return s;
}

bool sector_contains(const SectorSpec& s, const Vertex& v) {
  const double x = double(v.c[0]), y = double(v.c[1]);
  const double ratio = radial_measure(s, x, y) / s.x0_norm;
  if (ratio > 1 || ratio < 1 - s.K) return false;
  return angle_to_center(s, x, y) <= s.J;
}

uint64_t sector_volume(const SectorSpec& s) {
  // scan the bounding box of the (possibly degenerate) annulus sector
  double scan_r;
  if (s.mode == SectorNorm::euclidean) {
    scan_r = s.x0_norm + 1;
  } else {
    double cmin = kInfTime;
    for (int k = 0; k < 256; ++k) {
      const double phi = 2 * M_PI * k / 256;
      cmin = std::min(cmin, s.gnorm->eval(std::cos(phi), std::sin(phi)));
    }
    if (!(cmin > 0)) throw std::invalid_argument("sector_volume: degenerate g-norm");
    scan_r = s.x0_norm / cmin + 2;
  }
  const int32_t R = int32_t(std::ceil(scan_r)) + 1;
  uint64_t count = 0;
  Vertex v = Vertex::zero(2);
  for (int32_t x = -R; x <= R; ++x)
    for (int32_t y = -R; y <= R; ++y) {
      v.c[0] = x;
      v.c[1] = y;
      if (sector_contains(s, v)) ++count;
    }
  return count;
}

SectorTestReport largest_hole_sector_test(const HoleReport& holes, double C18) {
  SectorTestReport rep;
  if (holes.holes.empty()) return rep;
  rep.has_hole = true;

  const Hole* largest = &holes.holes.front();
  for (const Hole& h : holes.holes)
    if (h.volume > largest->volume) largest = &h;
  rep.hole_volume = largest->volume;

  Vertex x0 = largest->vertices.front();
  double best = x0.l2();
  for (const Vertex& v : largest->vertices) {
    const double r = v.l2();
    if (r > best || (r == best && v < x0)) {
      best = r;
      x0 = v;
    }
  }
  rep.x0 = x0;

  const SectorSpec s = sector(x0, C18);
  rep.contained = true;
  for (const Vertex& v : largest->vertices) {
    if (sector_contains(s, v)) continue;
    rep.contained = false;
    const double ratio = radial_measure(s, v.c[0], v.c[1]) / s.x0_norm;
    if (ratio > 1) {
      ++rep.escapes_far;
    } else if (ratio < 1 - s.K) {
      ++rep.escapes_near;
    } else {
      // signed angle: positive cross product = counterclockwise = left
      const double cross = s.x0[0] * v.c[1] - s.x0[1] * v.c[0];
      if (cross >= 0)
        ++rep.escapes_left;
      else
        ++rep.escapes_right;
    }
  }
  return rep;
}

}  // namespace fpp
