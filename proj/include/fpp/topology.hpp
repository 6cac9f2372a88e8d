#pragma once

#include <vector>

#include "fpp/growth.hpp"

namespace fpp {

struct Hole {
  std::vector<Vertex> vertices;  // lex sorted
  uint64_t volume = 0;
  double radial_diameter = 0;   // max ||v||_2 - min ||v||_2 over the hole
  double lateral_diameter = 0;  // (max pairwise angle) * mean ||v||_2
  Box bbox;
};

struct HoleReport {
  std::vector<Hole> holes;  // ordered by lex-minimal vertex
  uint64_t N = 0;           // number of holes
  uint64_t M = 0;           // maximal hole volume (0 if none)
  uint64_t edge_boundary_size = 0;
  double horizon = -1;
};

// Bounded complement components of a finite vertex set, classified against
// the bounding box inflated by 1: the component touching the inflated
// frontier is the unbounded one and is excluded.
HoleReport detect_holes(const std::vector<Vertex>& cells, double horizon = -1);
HoleReport detect_holes(const Ball& ball);

// #{ {x,y} : x in set, y not in set }
uint64_t edge_boundary(const std::vector<Vertex>& cells);
uint64_t edge_boundary(const Ball& ball);

// Exterior *-boundary: vertices outside S, in the unbounded component of
// S^c, at l-infinity distance 1 from S. S must be nonempty and connected.
std::vector<Vertex> exterior_star_boundary(const std::vector<Vertex>& S);

// Coarse cover B_n = { z : (4nz + [-2n, 2n-1]^d) meets S }.
std::vector<Vertex> box_cover(const std::vector<Vertex>& S, int n);

// max pairwise angle (radians, in [0,pi]) between vertices viewed from the
// origin; exposed for tests of the lateral-diameter metric
double max_pairwise_angle(const std::vector<Vertex>& vs);

}  // namespace fpp
