#include "fpp/growth.hpp"

#include <algorithm>

namespace fpp {

Ball::Ball(WeightField field, Vertex source, GrowthLimits limits)
    : field_(std::move(field)), source_(source), limits_(limits) {
  if (source.dim != field_.dim()) throw std::invalid_argument("source dimension mismatch");
  tentative_.insert_or_assign(pack_vertex(source_), 0.0);
  heap_.push({0.0, source_});
  grow_to(0.0);  // T(source,source) = 0: source is in B(t) for every t >= 0
}

// Pops the top heap entry. Settles it and relaxes neighbors when the entry
// is current; stale entries (already settled, or superseded by a smaller
// tentative) are dropped without side effects.
void Ball::settle_next() {
  HeapEntry e = heap_.top();
  heap_.pop();
  const uint64_t key = pack_vertex(e.v);
  if (settled_.contains(key)) return;
  const double* best = tentative_.find(key);
  if (!best || *best != e.t) return;
  if (settled_.size() >= limits_.max_vertices) {
    heap_.push(e);  // keep the frontier intact so growth can resume under a larger cap
    throw resource_limit_error("ball vertex cap exceeded (max_vertices=" +
                               std::to_string(limits_.max_vertices) + ")");
  }
  settled_.insert_or_assign(key, e.t);
  const int d = e.v.dim;
  for (int axis = 0; axis < d; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      Vertex u = e.v.shifted(axis, sign);
      const uint64_t ukey = pack_vertex(u);
      if (settled_.contains(ukey)) continue;
      const double w = field_.weight(sign > 0 ? Edge(e.v, axis) : Edge(u, axis));
      const double nt = e.t + w;
      double* cur = tentative_.find(ukey);
      if (cur && *cur <= nt) continue;
      tentative_.insert_or_assign(ukey, nt);
      heap_.push({nt, u});
    }
  }
}

void Ball::grow_to(double t) {
  while (!heap_.empty() && heap_.top().t <= t) settle_next();
  if (t > horizon_) horizon_ = t;
}

double Ball::passage_time(const Vertex& x) {
  if (x.dim != source_.dim) throw std::invalid_argument("vertex dimension mismatch");
  const uint64_t key = pack_vertex(x);
  const double* t = settled_.find(key);
  while (!t) {
    if (heap_.empty()) throw std::logic_error("frontier exhausted before target settled");
    settle_next();
    t = settled_.find(key);
  }
  // complete the level set so the ball stays a valid B(horizon)
  const double tx = *t;
  grow_to(tx);
  return tx;
}

std::vector<Vertex> Ball::vertices() const {
  std::vector<Vertex> out;
  out.reserve(settled_.size());
  const int d = source_.dim;
  settled_.for_each([&](uint64_t k, double) { out.push_back(unpack_vertex(k, d)); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<Vertex, double>> Ball::settled_table() const {
  std::vector<std::pair<Vertex, double>> out;
  out.reserve(settled_.size());
  const int d = source_.dim;
  settled_.for_each([&](uint64_t k, double t) { out.emplace_back(unpack_vertex(k, d), t); });
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<std::pair<Vertex, double>> Ball::frontier_table() const {
  std::vector<std::pair<Vertex, double>> out;
  const int d = source_.dim;
  tentative_.for_each([&](uint64_t k, double t) {
    if (!settled_.contains(k)) out.emplace_back(unpack_vertex(k, d), t);
  });
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Box Ball::bounding_box() const {
  Box b = Box::of(source_);
  const int d = source_.dim;
  settled_.for_each([&](uint64_t k, double) { b.include(unpack_vertex(k, d)); });
  return b;
}

Geodesic Ball::extract_geodesic(const Vertex& x) const {
  const double* tx = settled_.find(pack_vertex(x));
  if (!tx) throw std::invalid_argument("extract_geodesic: vertex not settled");
  Geodesic g;
  g.total_time = *tx;
  Vertex v = x;
  double tv = *tx;
  g.vertices.push_back(v);

  // lex-smallest strictly-earlier predecessor achieving exact equality
  auto strict_pred = [&](const Vertex& w, double tw, Vertex& out) {
    bool found = false;
    for (int axis = 0; axis < w.dim; ++axis)
      for (int sign = -1; sign <= 1; sign += 2) {
        Vertex u = w.shifted(axis, sign);
        const double* tu = settled_.find(pack_vertex(u));
        if (!tu || *tu >= tw) continue;
        if (*tu + field_.weight(Edge::between(u, w)) != tw) continue;
        if (!found || u < out) {
          out = u;
          found = true;
        }
      }
    return found;
  };

  while (!(v == source_)) {
    Vertex pred;
    if (strict_pred(v, tv, pred)) {
      g.vertices.push_back(pred);
      g.edges.push_back(Edge::between(pred, v));
      v = pred;
      tv = *settled_.find(pack_vertex(v));
      continue;
    }
    // zero-weight plateau: equality with equal times forces weight 0, and
    // settlement order inside a plateau is not lex-monotone, so walk the
    // plateau by BFS (lex frontier order) to a vertex with a strict
    // predecessor, or to the source
    FlatMap<int64_t> parent(64);
    parent.insert_or_assign(pack_vertex(v), int64_t(pack_vertex(v)));
    std::vector<Vertex> frontier{v};
    Vertex exit_vertex;
    bool have_exit = false;
    while (!frontier.empty() && !have_exit) {
      std::sort(frontier.begin(), frontier.end());
      std::vector<Vertex> next;
      for (const Vertex& w : frontier) {
        Vertex dummy;
        if (w == source_ || strict_pred(w, tv, dummy)) {
          exit_vertex = w;
          have_exit = true;
          break;
        }
        for (int axis = 0; axis < w.dim; ++axis)
          for (int sign = -1; sign <= 1; sign += 2) {
            Vertex u = w.shifted(axis, sign);
            const double* tu = settled_.find(pack_vertex(u));
            if (!tu || *tu != tv) continue;
            if (field_.weight(Edge::between(u, w)) != 0.0) continue;
            const uint64_t ukey = pack_vertex(u);
            if (parent.contains(ukey)) continue;
            parent.insert_or_assign(ukey, int64_t(pack_vertex(w)));
            next.push_back(u);
          }
      }
      frontier = std::move(next);
    }
    if (!have_exit) throw std::logic_error("geodesic backtrack failed (inconsistent times)");
    // unwind the plateau path v -> exit_vertex
    std::vector<Vertex> seg{exit_vertex};
    Vertex cur = exit_vertex;
    while (!(cur == v)) {
      cur = unpack_vertex(uint64_t(*parent.find(pack_vertex(cur))), v.dim);
      seg.push_back(cur);
    }
    // seg runs exit..v; append v-side first
    for (size_t i = seg.size() - 1; i > 0; --i) {
      g.vertices.push_back(seg[i - 1]);
      g.edges.push_back(Edge::between(seg[i], seg[i - 1]));
    }
    v = exit_vertex;
  }
  std::reverse(g.vertices.begin(), g.vertices.end());
  std::reverse(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<Vertex> Ball::out_set(const Vertex& x, const std::vector<Vertex>& probe) {
  const double tx = passage_time(x);
  Ball from_x(field_, x, limits_);
  std::vector<Vertex> out;
  for (const Vertex& z : probe) {
    const double t0z = passage_time(z);
    const double txz = from_x.passage_time(z);
    if (t0z == tx + txz) out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Ball Ball::with_field(WeightField f) const {
  if (f.dim() != field_.dim()) throw std::invalid_argument("with_field: dimension mismatch");
  Ball b = *this;
  b.field_ = std::move(f);
  return b;
}

Ball Ball::restore(WeightField field, Vertex source, GrowthLimits limits, double horizon,
                   const std::vector<std::pair<Vertex, double>>& settled,
                   const std::vector<std::pair<Vertex, double>>& frontier) {
  Ball b(std::move(field), source, limits);
  b.heap_ = {};
  b.tentative_.clear();
  b.settled_.reserve(settled.size());
  for (const auto& [v, t] : settled) b.settled_.insert_or_assign(pack_vertex(v), t);
  b.tentative_.reserve(frontier.size() + settled.size());
  for (const auto& [v, t] : frontier) {
    b.tentative_.insert_or_assign(pack_vertex(v), t);
    b.heap_.push({t, v});
  }
  b.horizon_ = horizon;
  return b;
}

FlatMap<double> restricted_distances(const WeightField& field, const VertexPredicate& member,
                                     const Vertex& src) {
  if (!member(src)) throw std::invalid_argument("restricted_distances: source not in region");
  using HE = std::pair<double, Vertex>;
  auto gt = [](const HE& a, const HE& b) {
    if (a.first != b.first) return a.first > b.first;
    return b.second < a.second;
  };
  std::priority_queue<HE, std::vector<HE>, decltype(gt)> heap(gt);
  FlatMap<double> dist;
  FlatMap<double> tent;
  tent.insert_or_assign(pack_vertex(src), 0.0);
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [t, v] = heap.top();
    heap.pop();
    const uint64_t key = pack_vertex(v);
    if (dist.contains(key)) continue;
    const double* best = tent.find(key);
    if (!best || *best != t) continue;
    dist.insert_or_assign(key, t);
    for (int axis = 0; axis < v.dim; ++axis) {
      for (int sign = -1; sign <= 1; sign += 2) {
        Vertex u = v.shifted(axis, sign);
        if (!member(u)) continue;
        const uint64_t ukey = pack_vertex(u);
        if (dist.contains(ukey)) continue;
        const double w = field.weight(sign > 0 ? Edge(v, axis) : Edge(u, axis));
        const double nt = t + w;
        double* cur = tent.find(ukey);
        if (cur && *cur <= nt) continue;
        tent.insert_or_assign(ukey, nt);
        heap.push({nt, u});
      }
    }
  }
  return dist;
}

double restricted_passage_time(const WeightField& field, const std::vector<Vertex>& S,
                               const Vertex& x, const Vertex& y) {
  FlatMap<char> set(S.size() * 2);
  for (const Vertex& v : S) set.insert_or_assign(pack_vertex(v), 1);
  if (!set.contains(pack_vertex(x)) || !set.contains(pack_vertex(y)))
    throw std::invalid_argument("restricted_passage_time: endpoint not in S");
  auto member = [&set](const Vertex& v) { return set.contains(pack_vertex(v)); };
  FlatMap<double> dist = restricted_distances(field, member, x);
  const double* t = dist.find(pack_vertex(y));
  return t ? *t : kInfTime;
}

}  // namespace fpp
