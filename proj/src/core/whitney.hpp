#pragma once

#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/grid_function.hpp"

namespace wnil {

// Ball cover of an open set given as a cell mask (nonzero cells belong to the
// set). Balls are sized off the distance to the complement so that doubling
// stays inside the set while the 4-fold dilate reaches the complement, and
// deep regions are grouped into dyadic blocks to keep the overlap bounded.
struct WhitneyCover {
  std::vector<Ball> balls;
};

// The mask grid must keep its two outermost cell layers in the complement;
// NotProper otherwise, EmptySet if no cell is marked.
WhitneyCover whitney_decompose(const GridFunction& mask);

// Discrete cover audit, all statements about grid cell centers:
// every marked center lies in a ball, quarter balls are pairwise disjoint
// (no center lies in two of them), doubled balls contain only marked
// centers, quadrupled balls contain an unmarked center, and max_overlap is
// the largest number of doubled balls any center lies in.
struct CoverCheck {
  bool covers = false;
  bool quarter_disjoint = false;
  bool scaled_inside = false;
  bool touches_complement = false;
  int max_overlap = 0;
};
CoverCheck verify_cover(const WhitneyCover& cover, const GridFunction& mask);

// One row per ball: center coordinates then radius.
void save_cover_csv(const WhitneyCover& cover, int dim, const std::string& path);

}  // namespace wnil
