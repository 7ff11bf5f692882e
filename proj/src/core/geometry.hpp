#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "core/error.hpp"

namespace wnil {

// Points live in R^1 or R^2; the second coordinate is 0 and ignored in 1D.
using Point = std::array<double, 2>;

double distance(const Point& a, const Point& b, int dim);

struct Box {
  int dim = 1;
  Point lo{0.0, 0.0};
  Point hi{1.0, 0.0};

  double width(int axis) const { return hi[axis] - lo[axis]; }
  double diameter() const;
};

// Open ball; membership tests are strict so a radius-h ball centered on a cell
// midpoint contains exactly that cell.
struct Ball {
  Point center{0.0, 0.0};
  double radius = 0.0;

  bool contains(const Point& x, int dim) const { return distance(center, x, dim) < radius; }
  Ball scaled(double factor) const { return Ball{center, radius * factor}; }
};

// Centers sit on the half-step lattice {lo + j*h/2}: it contains both cell
// midpoints and cell corners and nests exactly under h -> h/2 refinement.
// Radii are {h * 2^(k/m)}, m = radii_per_octave (m = 1 is the canonical
// dyadic set). stride/offset count half-steps; stride 2 with offset 1 walks
// the cell midpoints only.
struct BallFamilyPolicy {
  int center_stride = 1;
  int center_offset = 0;
  int radii_per_octave = 1;
  double max_radius_factor = 1.0;  // cap = factor * box diameter
};

struct BallFamily {
  Box domain;
  double h = 0.0;
  BallFamilyPolicy policy;
  std::vector<Ball> balls;
  std::vector<double> radius_tiers;  // ascending, one entry per distinct radius

  std::size_t size() const { return balls.size(); }
};

// Enumerates the finite family for the policy. Throws BadPolicy when the
// policy yields no balls or the parameters are out of range.
BallFamily ball_family(const Box& box, double h, const BallFamilyPolicy& policy = {});

}  // namespace wnil
