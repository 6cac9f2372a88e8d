#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fpp/lattice.hpp"

namespace fpp {

// Weights are quantized to this dyadic grid at generation time. Passage
// times are then exact sums of grid multiples (well below 2^53 grid units
// for any reachable ball), so float comparisons of times, geodesic partial
// sums, and out-set membership are exact and platform independent.
inline constexpr double kWeightGrid = 0x1p-20;

inline double quantize_weight(double w) {
  double q = std::round(w * 0x1p20) * 0x1p-20;
  return q < 0 ? 0.0 : q;
}

// critical probability of Bernoulli bond percolation on Z^d
double bond_percolation_pc(int dim);

enum class DistKind : uint8_t {
  constant = 0,
  two_point = 1,
  uniform = 2,
  exponential = 3,
  shifted_exponential = 4,
};

class WeightDistribution {
 public:
  static WeightDistribution constant(double c);
  static WeightDistribution two_point(double a, double b, double p_a);
  static WeightDistribution uniform(double lo, double hi);
  static WeightDistribution exponential(double rate);
  static WeightDistribution shifted_exponential(double shift, double rate);
  static WeightDistribution from_params(DistKind kind, double p0, double p1, double p2);

  DistKind kind() const { return kind_; }
  double param(int i) const { return p_[i]; }

  double icdf(double u) const;        // inverse CDF, then quantized to the grid
  double cdf(double x) const;         // exact CDF of the un-quantized law
  double atom_at_zero() const;        // P(tau_e = 0)
  double mean() const;
  std::string describe() const;

  bool operator==(const WeightDistribution& o) const {
    return kind_ == o.kind_ && p_[0] == o.p_[0] && p_[1] == o.p_[1] && p_[2] == o.p_[2];
  }

 private:
  WeightDistribution(DistKind k, double p0, double p1, double p2);
  DistKind kind_;
  double p_[3];
};

// Immutable lazily-evaluated i.i.d. edge-weight field with finite overrides.
// weight(e) is a pure function of (seed, canonical edge, distribution,
// overrides); no state is kept per edge.
class WeightField {
 public:
  WeightField(int dim, WeightDistribution dist, uint64_t seed);

  int dim() const { return dim_; }
  uint64_t seed() const { return seed_; }
  const WeightDistribution& distribution() const { return dist_; }

  double weight(const Edge& e) const;
  double weight(const Vertex& u, const Vertex& v) const { return weight(Edge::between(u, v)); }

  // value semantics: returns a new field, *this unchanged
  WeightField with_overrides(const std::vector<std::pair<Edge, double>>& patch) const;

  size_t override_count() const { return overrides_.size(); }
  std::vector<std::pair<Edge, double>> override_list() const;  // sorted, for serialization

 private:
  int dim_;
  WeightDistribution dist_;
  uint64_t seed_;
  FlatMap<double> overrides_;
};

}  // namespace fpp
