#pragma once

#include <optional>
#include <vector>

#include "fpp/gadgets.hpp"

namespace fpp {

// ---------------------------------------------------------------------------
// limit-shape estimation
// ---------------------------------------------------------------------------

struct DirectionEstimate {
  Vertex direction;       // integer lattice direction
  double unit_norm = 0;   // ||direction||_2
  double g_hat = 0;       // mean of T(0, k*direction) / (k*||direction||_2)
  double std_error = 0;
  std::vector<double> per_radius_mean;  // indexed like radii_used
};

struct ShapeEstimate {
  std::vector<DirectionEstimate> directions;
  std::vector<double> radii_used;  // euclidean radii probed (largest last)
  int replicas = 0;
  double in_radius = 0;   // of { z : g_hat(z) <= 1 }
  double out_radius = 0;
  GNorm to_gnorm() const;
};

struct FieldParams {
  int dim = 2;
  WeightDistribution distribution = WeightDistribution::constant(1);
  uint64_t base_seed = 1;
};

// Probes T(0, k*dir)/(k*|dir|) along integer directions; targets are exact
// lattice multiples so deterministic fields give exact estimates.
ShapeEstimate estimate_shape(const FieldParams& params, const std::vector<Vertex>& directions,
                             double r_max, int replicas, GrowthLimits limits = {});

// ---------------------------------------------------------------------------
// scaling fits
// ---------------------------------------------------------------------------

struct SeriesPoint {
  double t = 0;
  uint64_t seed = 0;
  double N = 0;
  double M = 0;
  double volume = 0;
  double boundary = 0;
};

struct FitLine {
  double slope = 0, intercept = 0, r2 = 0;
};

struct MModelFit {
  double coef_log = 0;        // M ~ c * log t
  double rss_log = 0;
  double exponent_loglog = 0; // M ~ (log t)^C
  double rss_loglog = 0;
  double coef_tlog = 0;       // M ~ C * t log t
  double rss_tlog = 0;
  int best = 0;               // 0: log, 1: (log t)^C, 2: t log t
};

struct ScalingFit {
  FitLine n_fit;              // log mean N vs log t
  double slope_ci_lo = 0, slope_ci_hi = 0;
  MModelFit m_fit;
  bool insufficient_holes = false;
  std::vector<double> t_values;
  std::vector<double> mean_N;
  std::vector<double> mean_M;
};

// Least squares on transformed coordinates; CI by seed-level resampling.
ScalingFit fit_scaling(const std::vector<SeriesPoint>& series);

// ---------------------------------------------------------------------------
// probes
// ---------------------------------------------------------------------------

struct StraightnessRow {
  uint64_t seed = 0;
  double radius = 0;
  Vertex x;
  double max_angle = 0;  // max |theta(x,z)| over z in out(0,x) on the probe ring
  uint64_t out_count = 0;
};

struct StraightnessReport {
  std::vector<StraightnessRow> rows;
  double loglog_slope = 0;  // fitted slope of log max-angle vs log radius
  double p = 0;
};

StraightnessReport straightness_probe(const FieldParams& params, const std::vector<double>& radii,
                                      double p, int seeds, int samples_per_radius = 4,
                                      GrowthLimits limits = {});

struct KestenReport {
  int n = 0;
  bool exact = false;
  std::vector<double> min_ratios;  // per configuration: min T(gamma)/n
  double overall_min = 0;
  double percentile_1 = 0;
};

// exact mode enumerates every edge-self-avoiding n-edge path through the
// origin (n <= 12); sampled mode extends greedily by cheapest unused edge
KestenReport kesten_probe(const FieldParams& params, int n, int samples, bool exact);

struct ConcentrationRow {
  double radius = 0;
  double mean = 0;
  double stddev = 0;
  double g_hat = 0;                    // estimated g at this radius
  std::vector<double> exceed_fraction; // per C in c_sweep
  double min_radial_rate = 0;          // min over replicas of radial difference rate
};

struct ConcentrationReport {
  std::vector<ConcentrationRow> rows;
  std::vector<double> c_sweep;
  double chi = 0;       // fitted fluctuation exponent: std ~ r^chi
  bool degenerate = false;
  int replicas = 0;
};

ConcentrationReport concentration_probe(const FieldParams& params, const Vertex& direction,
                                        const std::vector<double>& radii, int replicas,
                                        const std::vector<double>& c_sweep = {1, 2, 3},
                                        GrowthLimits limits = {});

// least squares helper (shared by probes and tests)
FitLine least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace fpp
