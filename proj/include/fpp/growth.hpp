#pragma once

#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "fpp/weights.hpp"

namespace fpp {

inline constexpr double kInfTime = std::numeric_limits<double>::infinity();

struct Geodesic {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  double total_time = 0;
};

struct GrowthLimits {
  uint64_t max_vertices = 60'000'000;
};

// The ball B(t): settled passage times plus a resumable tentative frontier.
// Settlement order is (time, lex vertex), which fixes the float arithmetic
// and makes every derived quantity reproducible.
class Ball {
 public:
  Ball(WeightField field, Vertex source, GrowthLimits limits = {});

  // settle every vertex with T(source,x) <= t; monotone and incremental
  void grow_to(double t);

  // exact T(source,x); grows the ball as needed (subject to the cap)
  double passage_time(const Vertex& x);

  bool settled(const Vertex& x) const { return settled_.contains(pack_vertex(x)); }
  const double* time_of(const Vertex& x) const { return settled_.find(pack_vertex(x)); }

  double horizon() const { return horizon_; }
  size_t size() const { return settled_.size(); }
  const Vertex& source() const { return source_; }
  const WeightField& field() const { return field_; }
  const GrowthLimits& limits() const { return limits_; }

  // settled vertices in lex order (canonical view for topology/serialization)
  std::vector<Vertex> vertices() const;
  std::vector<std::pair<Vertex, double>> settled_table() const;
  Box bounding_box() const;

  // unordered settled iteration without allocation
  template <typename F>
  void for_each_settled(F&& f) const {
    const int d = source_.dim;
    settled_.for_each([&](uint64_t k, double t) { f(unpack_vertex(k, d), t); });
  }

  // path from source to settled x with exact partial-sum consistency
  Geodesic extract_geodesic(const Vertex& x) const;

  // {z in probe : T(0,z) == T(0,x) + T(x,z)}, exact float equality
  std::vector<Vertex> out_set(const Vertex& x, const std::vector<Vertex>& probe);

  // same settled state and frontier under a different weight field; valid
  // when the fields agree on every edge with an endpoint in the ball
  Ball with_field(WeightField f) const;

  // snapshot access (canonical, sorted)
  std::vector<std::pair<Vertex, double>> frontier_table() const;
  static Ball restore(WeightField field, Vertex source, GrowthLimits limits, double horizon,
                      const std::vector<std::pair<Vertex, double>>& settled,
                      const std::vector<std::pair<Vertex, double>>& frontier);

 private:
  struct HeapEntry {
    double t;
    Vertex v;
    bool operator>(const HeapEntry& o) const {
      if (t != o.t) return t > o.t;
      return o.v < v;
    }
  };

  void settle_next();  // pop one heap entry, settling it when current

  WeightField field_;
  Vertex source_;
  GrowthLimits limits_;
  double horizon_ = -1;
  FlatMap<double> settled_;
  FlatMap<double> tentative_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap_;
};

using VertexPredicate = std::function<bool(const Vertex&)>;

// All-targets Dijkstra restricted to paths whose vertices satisfy `member`.
// The caller guarantees the member set reachable from src is finite.
FlatMap<double> restricted_distances(const WeightField& field, const VertexPredicate& member,
                                     const Vertex& src);

// Minimal passage time over paths with all vertices in S; +inf if x and y
// are in different components of the induced subgraph.
double restricted_passage_time(const WeightField& field, const std::vector<Vertex>& S,
                               const Vertex& x, const Vertex& y);

}  // namespace fpp
