#include "fpp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace fpp {

namespace {

// dense index over an integer box
struct Grid {
  Box box;
  int dim;
  std::array<int64_t, kMaxDim> stride{};
  int64_t cells = 1;

  explicit Grid(const Box& b) : box(b), dim(b.dim) {
    for (int i = dim - 1; i >= 0; --i) {
      stride[i] = cells;
      cells *= int64_t(b.hi[i] - b.lo[i] + 1);
    }
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
  bool on_frontier(const Vertex& v) const {
    for (int i = 0; i < dim; ++i)
      if (v.c[i] == box.lo[i] || v.c[i] == box.hi[i]) return true;
    return false;
  }
};

struct UnionFind {
  std::vector<int32_t> parent;
  explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int32_t find(int32_t x) {
    int32_t root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      int32_t next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  }
  void unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;  // smaller index wins: deterministic labels
  }
};

Box bounding_box_of(const std::vector<Vertex>& cells) {
  Box b = Box::of(cells.front());
  for (const Vertex& v : cells) b.include(v);
  return b;
}

double angle_between(const Vertex& u, const Vertex& v) {
  double nu = u.l2(), nv = v.l2();
  if (nu == 0 || nv == 0) return 0;
  double dot = 0;
  for (int i = 0; i < u.dim; ++i) dot += double(u.c[i]) * double(v.c[i]);
  double c = dot / (nu * nv);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

double max_pairwise_angle(const std::vector<Vertex>& vs) {
  if (vs.size() < 2) return 0;
  if (vs.front().dim == 2) {
    // circular sweep: extent below pi equals the max pairwise angle;
    // otherwise two-pointer over sorted polar angles
    std::vector<double> phi;
    phi.reserve(vs.size());
    for (const Vertex& v : vs)
      if (v.c[0] != 0 || v.c[1] != 0) phi.push_back(std::atan2(double(v.c[1]), double(v.c[0])));
    if (phi.size() < 2) return 0;
    std::sort(phi.begin(), phi.end());
    double max_gap = 2 * M_PI - (phi.back() - phi.front());
    for (size_t i = 1; i < phi.size(); ++i) max_gap = std::max(max_gap, phi[i] - phi[i - 1]);
    const double extent = 2 * M_PI - max_gap;
    if (extent <= M_PI) return extent;
    // wide sets (extent beyond pi) are rare and small; brute force is exact
    double best = 0;
    for (size_t i = 0; i < phi.size(); ++i)
      for (size_t j = i + 1; j < phi.size(); ++j) {
        double d = phi[j] - phi[i];
        best = std::max(best, std::min(d, 2 * M_PI - d));
      }
    return best;
  }
  double best = 0;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) best = std::max(best, angle_between(vs[i], vs[j]));
  return best;
}

HoleReport detect_holes(const std::vector<Vertex>& cells, double horizon) {
  HoleReport rep;
  rep.horizon = horizon;
  if (cells.empty()) return rep;
  const int dim = cells.front().dim;

  Box box = bounding_box_of(cells);
  box.inflate(1);
  Grid grid(box);

  std::vector<uint8_t> in_set(size_t(grid.cells), 0);
  for (const Vertex& v : cells) in_set[size_t(grid.index(v))] = 1;

  // label complement cells; unite along lattice adjacencies inside the box
  UnionFind uf(size_t(grid.cells));
  for (int64_t idx = 0; idx < grid.cells; ++idx) {
    if (in_set[size_t(idx)]) continue;
    const Vertex v = grid.vertex(idx);
    for (int axis = 0; axis < dim; ++axis) {
      if (v.c[axis] == box.hi[axis]) continue;
      const int64_t nidx = idx + grid.stride[axis];
      if (!in_set[size_t(nidx)]) uf.unite(int32_t(idx), int32_t(nidx));
    }
  }

  // complement components touching the inflated frontier are unbounded
  std::vector<uint8_t> unbounded(size_t(grid.cells), 0);
  for (int64_t idx = 0; idx < grid.cells; ++idx) {
    if (in_set[size_t(idx)]) continue;
    const Vertex v = grid.vertex(idx);
    if (grid.on_frontier(v)) unbounded[size_t(uf.find(int32_t(idx)))] = 1;
  }

  // group hole cells by root, in index order (lex order of vertices within
  // the grid), so hole ids follow the lex-minimal vertex
  FlatMap<int32_t> hole_id(1024);
  uint64_t boundary = 0;
  for (int64_t idx = 0; idx < grid.cells; ++idx) {
    if (in_set[size_t(idx)]) {
      const Vertex v = grid.vertex(idx);
      for (int axis = 0; axis < dim; ++axis) {
        for (int sign = -1; sign <= 1; sign += 2) {
          Vertex u = v.shifted(axis, sign);
          if (!box.contains(u) || !in_set[size_t(grid.index(u))]) ++boundary;
        }
      }
      continue;
    }
    const int32_t root = uf.find(int32_t(idx));
    if (unbounded[size_t(root)]) continue;
    int32_t* id = hole_id.find(uint64_t(root));
    if (!id) {
      hole_id.insert_or_assign(uint64_t(root), int32_t(rep.holes.size()));
      rep.holes.emplace_back();
      id = hole_id.find(uint64_t(root));
    }
    rep.holes[size_t(*id)].vertices.push_back(grid.vertex(idx));
  }

  rep.edge_boundary_size = boundary;
  rep.N = rep.holes.size();
  for (Hole& h : rep.holes) {
    h.volume = h.vertices.size();
    rep.M = std::max(rep.M, h.volume);
    h.bbox = bounding_box_of(h.vertices);
    double rmin = kInfTime, rmax = 0, rsum = 0;
    for (const Vertex& v : h.vertices) {
      const double r = v.l2();
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      rsum += r;
    }
    h.radial_diameter = rmax - rmin;
    h.lateral_diameter = max_pairwise_angle(h.vertices) * (rsum / double(h.volume));
  }
  return rep;
}

HoleReport detect_holes(const Ball& ball) {
  HoleReport rep = detect_holes(ball.vertices(), ball.horizon());
  return rep;
}

uint64_t edge_boundary(const std::vector<Vertex>& cells) {
  if (cells.empty()) return 0;
  FlatMap<char> set(cells.size() * 2);
  for (const Vertex& v : cells) set.insert_or_assign(pack_vertex(v), 1);
  uint64_t count = 0;
  for (const Vertex& v : cells)
    for (int axis = 0; axis < v.dim; ++axis)
      for (int sign = -1; sign <= 1; sign += 2)
        if (!set.contains(pack_vertex(v.shifted(axis, sign)))) ++count;
  return count;
}

uint64_t edge_boundary(const Ball& ball) { return edge_boundary(ball.vertices()); }

std::vector<Vertex> exterior_star_boundary(const std::vector<Vertex>& S) {
  if (S.empty()) throw std::invalid_argument("exterior_star_boundary: empty set");
  const int dim = S.front().dim;
  FlatMap<char> set(S.size() * 2);
  for (const Vertex& v : S) set.insert_or_assign(pack_vertex(v), 1);

  // reject disconnected S (lattice connectivity)
  {
    std::vector<Vertex> stack{S.front()};
    FlatMap<char> seen(S.size() * 2);
    seen.insert_or_assign(pack_vertex(S.front()), 1);
    size_t visited = 1;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (int axis = 0; axis < dim; ++axis)
        for (int sign = -1; sign <= 1; sign += 2) {
          Vertex u = v.shifted(axis, sign);
          const uint64_t k = pack_vertex(u);
          if (set.contains(k) && !seen.contains(k)) {
            seen.insert_or_assign(k, 1);
            ++visited;
            stack.push_back(u);
          }
        }
    }
    if (visited != S.size()) throw std::invalid_argument("exterior_star_boundary: S is not connected");
  }

  Box box = bounding_box_of(S);
  box.inflate(2);
  Grid grid(box);
  std::vector<uint8_t> in_set(size_t(grid.cells), 0);
  for (const Vertex& v : S) in_set[size_t(grid.index(v))] = 1;

  // flood the unbounded complement from the box frontier
  std::vector<uint8_t> outside(size_t(grid.cells), 0);
  std::vector<int64_t> queue;
  for (int64_t idx = 0; idx < grid.cells; ++idx) {
    if (in_set[size_t(idx)]) continue;
    if (grid.on_frontier(grid.vertex(idx))) {
      outside[size_t(idx)] = 1;
      queue.push_back(idx);
    }
  }
  while (!queue.empty()) {
    const int64_t idx = queue.back();
    queue.pop_back();
    const Vertex v = grid.vertex(idx);
    for (int axis = 0; axis < dim; ++axis)
      for (int sign = -1; sign <= 1; sign += 2) {
        Vertex u = v.shifted(axis, sign);
        if (!box.contains(u)) continue;
        const int64_t uidx = grid.index(u);
        if (in_set[size_t(uidx)] || outside[size_t(uidx)]) continue;
        outside[size_t(uidx)] = 1;
        queue.push_back(uidx);
      }
  }

  // collect outside cells at l-infinity distance 1 from S
  std::vector<Vertex> result;
  for (const Vertex& v : S) {
    // enumerate the 3^d - 1 star neighbors
    std::array<int32_t, kMaxDim> off{};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == dim) {
        bool all_zero = true;
        Vertex u = v;
        for (int i = 0; i < dim; ++i) {
          u.c[i] += off[i];
          if (off[i] != 0) all_zero = false;
        }
        if (all_zero) return;
        const int64_t idx = grid.index(u);
        if (outside[size_t(idx)]) result.push_back(u);
        return;
      }
      for (int32_t d = -1; d <= 1; ++d) {
        off[axis] = d;
        rec(axis + 1);
      }
    };
    rec(0);
  }
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

std::vector<Vertex> box_cover(const std::vector<Vertex>& S, int n) {
  if (n < 1) throw std::invalid_argument("box_cover: n >= 1 required");
  // boxes 4nz + [-2n, 2n-1]^d tile the lattice: each vertex has exactly one z
  const int64_t side = 4 * int64_t(n);
  std::vector<Vertex> out;
  out.reserve(S.size());
  for (const Vertex& v : S) {
    Vertex z = Vertex::zero(v.dim);
    for (int i = 0; i < v.dim; ++i) {
      int64_t shifted = int64_t(v.c[i]) + 2 * int64_t(n);
      int64_t q = shifted / side;
      if (shifted < 0 && shifted % side != 0) --q;  // floor division
      z.c[i] = int32_t(q);
    }
    out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace fpp
