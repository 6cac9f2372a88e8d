#pragma once

#include <optional>
#include <vector>

#include "fpp/topology.hpp"

namespace fpp {

// ---------------------------------------------------------------------------
// barrel region and planted weight configuration
// ---------------------------------------------------------------------------

// Parameters of the barrel construction inside Lambda(n): low-band corridor
// weights in [a-delta, a] on edges of the interior boundary ring plus the
// access line, high band [b, 2b] on every other edge of Lambda(n).
// delta = eps^4 and m1 = floor(eps*n), m3 = floor(eps*m1), m2 = floor(eps*m3),
// L = floor(eps*m2).
struct BarrelSpec {
  int n = 0;
  double a = 0, b = 0, eps = 0, delta = 0;
  int m1 = 0, m2 = 0, m3 = 0, L = 0;
  bool chain_ok = false;  // 1 <= m2 <= eps*m3 <= eps^2*m1 <= eps^3*n after flooring

  // rejects parameter sets whose floored sizes violate the hypothesis chain
  static BarrelSpec make(int n, double a, double b, double eps);
  // validates geometry only (0 < a < b, eps range, m1 >= 1); chain_ok records
  // whether the hypothesis chain happens to hold
  static BarrelSpec make_relaxed(int n, double a, double b, double eps);

  double kappa() const;  // eps^4*n + a*(n + 2*eps^2*n) + a*eps^3*n
  double window_width() const;  // eps^4 * n
};

// Geometry of R(m1,m2,m3), its interior boundary and the access line, all as
// O(1) predicates plus enumerations for tests and override generation.
struct BarrelGeometry {
  BarrelSpec spec;
  int dim;

  BarrelGeometry(const BarrelSpec& s, int d) : spec(s), dim(d) {}

  static bool in_lambda(const Vertex& v, int n) { return v.l1() <= n; }

  int64_t side_sum(const Vertex& v) const {  // sum_{i>=2} |x_i|
    int64_t s = 0;
    for (int i = 1; i < dim; ++i) s += std::abs(int64_t(v.c[i]));
    return s;
  }
  bool in_region(const Vertex& v) const {
    return v.c[0] >= -spec.m1 && v.c[0] <= spec.m2 && side_sum(v) <= spec.m3;
  }
  bool on_interior_boundary(const Vertex& v) const {
    if (!in_region(v)) return false;
    return v.c[0] == -spec.m1 || v.c[0] == spec.m2 || side_sum(v) == spec.m3;
  }
  bool on_line(const Vertex& v) const {
    if (v.c[0] > -spec.m1 || v.c[0] < -spec.n) return false;
    for (int i = 1; i < dim; ++i)
      if (v.c[i] != 0) return false;
    return true;
  }
  bool in_corridor(const Vertex& v) const { return on_interior_boundary(v) || on_line(v); }

  // interior boundary split by first coordinate: R1 (= -m1), R2 (= m2),
  // R3 (strictly between)
  int boundary_part(const Vertex& v) const {
    if (v.c[0] == -spec.m1) return 1;
    if (v.c[0] == spec.m2) return 2;
    return 3;
  }

  std::vector<Vertex> region() const;
  std::vector<Vertex> interior_boundary() const;
  std::vector<Vertex> line() const;
};

enum class BandMode { min_extremal, max_extremal, sampled };

// Weights for every edge with both endpoints in Lambda(n): corridor edges in
// the low band, all others in the high band. Values land on the weight grid.
std::vector<std::pair<Edge, double>> en_overrides(const BarrelSpec& spec, int dim, BandMode mode,
                                                  uint64_t sample_seed = 0);

struct BarrelReport {
  bool upper_ok = false;  // T(-n e1, y) <= a(n+2m3) + a m2 for all y in R-hat
  bool lower_ok = false;  // T(x, 0) >= (a-delta)(n+2m3) + b m2 for all |x|_1 = n
  // minimum slacks, exact in weight-grid ticks (2^-20 time units)
  int64_t upper_margin_ticks = 0;
  int64_t lower_margin_ticks = 0;
  double upper_margin = 0;
  double lower_margin = 0;
  Vertex worst_upper;
  Vertex worst_lower;
  size_t upper_targets = 0;
  size_t lower_targets = 0;
};

// Deterministic verification of the two barrel inequalities by restricted
// Dijkstra over Lambda(n) in exact integer ticks.
BarrelReport verify_barrel(const BarrelSpec& spec, int dim, BandMode mode,
                           uint64_t sample_seed = 0);

// ---------------------------------------------------------------------------
// good vertices
// ---------------------------------------------------------------------------

struct GoodVertexCertificate {
  Vertex x;
  std::vector<Vertex> path;  // gamma_x, starts at x +- n e_j; may be a single vertex
  Edge entry_edge;           // e_x: joins path.back() to a ball vertex, weight <= b_prime
  double b_prime = 0;
  int n = 0;
};

struct ScanResult {
  std::vector<GoodVertexCertificate> certificates;
  double density_ratio = 0;  // count * n^(d-1) / #B^((d-1)/d)
  uint64_t ball_volume = 0;
};

// Greedy lex-ordered scan for good vertices with pairwise l1 spacing >= 4n.
// Candidates are restricted to the ball's bounding box inflated by
// `window_inflation` cells (default 1).
ScanResult scan_good_vertices(const Ball& ball, double b_prime, int n, int window_inflation = 1);

// raw predicate re-check of a certificate against a ball
bool validate_certificate(const Ball& ball, const GoodVertexCertificate& cert,
                          std::string* why = nullptr);

// ---------------------------------------------------------------------------
// hole planting
// ---------------------------------------------------------------------------

struct PlantLog {
  std::vector<Box> boxes;  // previously planted cert boxes; plants must be disjoint
};

struct PlantReport {
  bool hole_formed = false;          // holds at every tested s in the window
  double window_lo = 0, window_hi = 0;
  std::vector<double> s_values;      // {t+kappa, t+kappa+w/2, t+kappa+w}
  std::vector<bool> formed_at_s;
  std::vector<uint64_t> component_sizes;
  double min_volume_required = 0;    // (L/d)^d
  uint64_t overrides_applied = 0;
};

// Plants the isometry-mapped barrel configuration in cert.x + Lambda(n),
// imposes the cheap-path condition on gamma_x, regrows from the ball's state
// at time t and checks the kappa-window for enclosure of cert.x + Lambda(L).
PlantReport plant_and_verify_hole(const Ball& ball_at_t, const GoodVertexCertificate& cert,
                                  const BarrelSpec& spec, BandMode mode, PlantLog& log,
                                  uint64_t sample_seed = 0);

// ---------------------------------------------------------------------------
// sectors
// ---------------------------------------------------------------------------

enum class SectorNorm { euclidean, g_norm };

// Convex-interpolated norm estimate from probed lattice directions.
struct GNorm {
  std::vector<std::array<double, 2>> unit_dirs;
  std::vector<double> values;  // g(unit dir)
  double eval(double x, double y) const;
};

struct SectorSpec {
  std::array<double, 2> x0{};  // center direction (d = 2)
  double x0_norm = 0;          // ||x0||_2 (euclidean) or g(x0) (g-norm)
  double J = 0;                // angular half-width
  double K = 0;                // radial depth fraction
  double C18 = 0;
  SectorNorm mode = SectorNorm::euclidean;
  std::optional<GNorm> gnorm;
};

// Euclidean annular sector: |theta(v,x0)| <= J and 1-K <= |v|/|x0| <= 1,
// with J = (log|x0|)^(C18-3)/|x0| and K = (log|x0|)^C18/|x0|. Requires
// |x0|_2 > e and C18 > 3; d = 2 only.
SectorSpec sector(const Vertex& x0, double C18);

// g-norm variant: K = 3*C35*sqrt(g log g)/g, J = (64/(a*c22)) * K.
SectorSpec sector_gnorm(const Vertex& x0, const GNorm& g, double a, double c22, double C35);

bool sector_contains(const SectorSpec& s, const Vertex& v);
uint64_t sector_volume(const SectorSpec& s);  // exact lattice-point count

struct SectorTestReport {
  bool has_hole = false;
  bool contained = false;
  Vertex x0;
  uint64_t hole_volume = 0;
  uint64_t escapes_near = 0, escapes_far = 0, escapes_left = 0, escapes_right = 0;
};

// Builds the sector at the max-norm vertex of the largest hole and reports
// whether the hole stays inside, classifying any escapes by side.
SectorTestReport largest_hole_sector_test(const HoleReport& holes, double C18);

}  // namespace fpp
